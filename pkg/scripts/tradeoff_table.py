"""Ebits and success probability per gate angle for each probabilistic scheme.

Columns: the planner's choice, plain FPT at the planner's F, and the
single-outcome scheme at its optimal alpha. Deterministic always costs 1 ebit.

    python scripts/tradeoff_table.py [--xi 0.01 0.05 0.17 0.3 0.5 0.785]
"""

import argparse

import numpy as np

from stator_gates.analysis import plan_for_xi
from stator_gates.protocol import fpt_entanglement, smallxi_entanglement


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--xi", type=float, nargs="+", default=[0.01, 0.02, 0.05, 0.17, 0.3, 0.4, 0.6, np.pi / 4])
    args = ap.parse_args()

    print(f"{'xi':>7} {'plan':>9} {'n':>8} {'E':>8} {'F':>8} {'E_fpt@F':>8} {'E_1out':>8} {'F_1out':>8}")
    for xi in args.xi:
        p = plan_for_xi(xi)
        n = "-" if p.n is None else f"{p.n:8.4f}"
        f1 = 1 / (1 + np.sin(2 * xi))
        print(
            f"{xi:7.4f} {p.method:>9} {n:>8} {p.E0:8.4f} {p.F:8.4f} "
            f"{fpt_entanglement(p.F):8.4f} {smallxi_entanglement(xi):8.4f} {f1:8.4f}"
        )


if __name__ == "__main__":
    main()
