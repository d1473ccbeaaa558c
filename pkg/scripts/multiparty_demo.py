"""Gate between N partners who share no entanglement with one another.

Prints the pairwise PPT eigenvalues, the cut entropies and F per mode.

    python scripts/multiparty_demo.py [--N 3] [--xi 0.17]
"""

import argparse
from itertools import combinations

from stator_gates.analysis import plan_for_xi
from stator_gates.improved import params_from_nb
from stator_gates.multiparty import (
    MultipartySpec,
    bipartition_entropy,
    build_quasi_ghz,
    pairwise_separability,
    partner_cuts,
    run_multiparty_protocol,
)
from stator_gates.protocol import GateSpec, deterministic_config
from stator_gates.rng import SplitMix64


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--xi", type=float, default=0.17)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    plan = plan_for_xi(args.xi)
    n = plan.n if plan.n is not None else 2.0
    p = params_from_nb(n, 1.001, args.xi)
    spec = MultipartySpec(args.N, p.resource())
    state = build_quasi_ghz(spec)

    print(f"N={args.N}, xi={args.xi}, n={n:.5f}, H={spec.lam.H:.6f}")
    for pair in combinations(spec.ancillas, 2):
        lam_min, sep = pairwise_separability(state, pair)
        print(f"  PPT {pair[0]:>2}-{pair[1]:<2} min eig {lam_min:+.3e} {'sep' if sep else 'ENT'}")
    for cut in partner_cuts(spec):
        print(f"  S({','.join(cut)}) = {bipartition_entropy(state, cut):.6f}")

    target = SplitMix64(args.seed).random_state(spec.targets)
    rep = run_multiparty_protocol(spec, args.xi, target, improved=p)
    print(f"improved:      F={rep.F:.6f} E={rep.E:.6f} cbits={rep.classical_bits}")
    det_spec, angles = deterministic_config(GateSpec(args.xi))
    rep = run_multiparty_protocol(MultipartySpec(args.N, det_spec), args.xi, target, angles=angles)
    print(f"deterministic: F={rep.F:.6f} E={rep.E:.6f} cbits={rep.classical_bits}")


if __name__ == "__main__":
    main()
