"""Acceptance checks, shared by ``stator-gates verify-all`` and the test suite."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis
from .improved import (
    failure_probability_closed,
    params_from_nb,
    run_improved_protocol,
    simulated_failure,
)
from .linalg import EPS_ALG, EPS_NUM, EPS_SIM, binary_entropy
from .multiparty import (
    MultipartySpec,
    bipartition_entropy,
    build_quasi_ghz,
    pairwise_separability,
    partner_cuts,
    run_multiparty_protocol,
)
from .protocol import (
    GateSpec,
    ResourceSpec,
    deterministic_config,
    fpt_config,
    optimal_alpha,
    run_general_protocol,
    smallxi_config,
    target_gate,
)
from .rng import DEFAULT_SEED, SplitMix64
from .stator import MeasurementAngles

REF_TOL = 0.002


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    expected: str
    actual: str
    tolerance: str
    passed: bool
    gated: bool = True

    def line(self) -> str:
        flag = ("PASS" if self.passed else "FAIL") if self.gated else "INFO"
        return (
            f"[{flag}] {self.criterion:>2} {self.name}: expected {self.expected}, "
            f"actual {self.actual}, tol {self.tolerance}"
        )


def _random_gate(rng: SplitMix64, xi: float | None = None) -> GateSpec:
    if xi is None:
        xi = rng.uniform(0, np.pi / 4)
    return GateSpec(xi, rng.random_axis(), rng.random_axis())


def check_deterministic(seed: int = DEFAULT_SEED, draws: int = 100) -> list[Check]:
    rng = SplitMix64(seed)
    worst_F, worst_overlap, worst_E = 0.0, 1.0, 0.0
    for _ in range(draws):
        g = _random_gate(rng)
        target = rng.random_state(("A", "B"))
        spec, angles = deterministic_config(g)
        rep = run_general_protocol(spec, angles, g, target)
        expect = target_gate(g) @ target.amplitudes
        worst_F = max(worst_F, abs(rep.F - 1))
        worst_E = max(worst_E, abs(rep.E - 1))
        for br in rep.branches:
            ov = abs(np.vdot(expect, br.post_state.amplitudes))
            worst_overlap = min(worst_overlap, ov)
    return [
        Check(1, "deterministic |F-1|", "0", f"{worst_F:.3e}", "1e-12", worst_F <= EPS_ALG),
        Check(1, "deterministic min overlap", "1", f"{worst_overlap:.15f}", "1e-10",
              worst_overlap >= 1 - EPS_SIM),
        Check(1, "deterministic |E-1|", "0", f"{worst_E:.3e}", "1e-12", worst_E <= EPS_ALG),
    ]


def check_fpt(seed: int = DEFAULT_SEED) -> list[Check]:
    rng = SplitMix64(seed)
    worst = 0.0
    for F_target in np.linspace(0.05, 1.0, 20):
        g = _random_gate(rng, xi=rng.uniform(0.01, np.pi / 4))
        spec, angles = fpt_config(g, F_target)
        rep = run_general_protocol(spec, angles, g, rng.random_state(("A", "B")))
        worst = max(worst, abs(rep.F - 2 * spec.lam[0] ** 2))
    E = fpt_config(GateSpec(0.5), 0.793)[0]
    E = binary_entropy(E.lam[0] ** 2)
    return [
        Check(2, "FPT |F - 2 lambda0^2|", "0", f"{worst:.3e}", "1e-12", worst <= EPS_ALG),
        Check(2, "FPT E at F=0.793", "0.969", f"{E:.6f}", "0.002", abs(E - 0.969) <= REF_TOL),
    ]


def smallxi_branch_probability(xi: float, alpha: float) -> float:
    g = GateSpec(xi)
    spec, angles = smallxi_config(g, alpha)
    target = SplitMix64(DEFAULT_SEED).random_state(("A", "B"))
    rep = run_general_protocol(spec, angles, g, target)
    return rep.probability_where(basis="B10")


def check_smallxi(sweep_xis=(0.17, 0.5), sweep_points: int = 1000) -> list[Check]:
    worst = 0.0
    for xi in np.linspace(0.02, 0.76, 20):
        p = smallxi_branch_probability(xi, optimal_alpha(GateSpec(xi)))
        worst = max(worst, abs(p - 1 / (1 + np.sin(2 * xi))))
    excess = -np.inf
    alphas = np.linspace(0, np.pi / 2, sweep_points + 2)[1:-1]
    for xi in sweep_xis:
        bound = 1 / (1 + np.sin(2 * xi))
        excess = max(excess, max(smallxi_branch_probability(xi, a) for a in alphas) - bound)
    return [
        Check(3, "small-xi P(B10) at optimal alpha", "1/(1+sin 2xi)", f"max dev {worst:.3e}",
              "1e-10", worst <= EPS_SIM),
        Check(3, "small-xi alpha sweep max - bound", "<= 0", f"{excess:.3e}", "1e-10",
              excess <= EPS_SIM),
    ]


def check_improved(seed: int = DEFAULT_SEED, draws: int = 500) -> list[Check]:
    rng = SplitMix64(seed)
    worst = 0.0
    for _ in range(draws):
        n = float(np.exp(rng.uniform(np.log(0.2), np.log(10.0))))
        b = 1.5 - rng.uniform(0, 0.5)  # (1, 1.5]
        xi = np.pi / 4 - rng.uniform(0, np.pi / 4)  # (0, pi/4]
        g = _random_gate(rng, xi=xi)
        p = params_from_nb(n, b, xi)
        rep = run_improved_protocol(p, g, rng.random_state(("A", "B")))
        worst = max(worst, abs(simulated_failure(rep) - failure_probability_closed(n, b, xi)))
    return [Check(4, "improved joint failure vs closed form", "0", f"{worst:.3e}", "1e-10",
                  worst <= EPS_SIM)]


def check_figure(b: float = analysis.DEFAULT_B) -> list[Check]:
    cr = analysis.find_crossings(analysis.generate_curve(b))
    n1, E = cr.M0
    F, xi = cr.M1[1], cr.M2[1]
    return [
        Check(5, "crossing n1", "1.521", f"{n1:.6f}", "0.005", abs(n1 - 1.521) <= 0.005),
        Check(5, "E at crossing", "0.969", f"{E:.6f}", "0.002", abs(E - 0.969) <= REF_TOL),
        Check(5, "F at crossing", "0.793", f"{F:.6f}", "0.002", abs(F - 0.793) <= REF_TOL),
        Check(5, "xi at crossing", "0.353", f"{xi:.6f}", "0.002", abs(xi - 0.353) <= REF_TOL),
    ]


def check_point() -> list[Check]:
    plan = analysis.plan_for_xi(0.17)
    return [
        Check(6, "plan(0.17) E0", "0.897", f"{plan.E0:.6f}", "0.002", abs(plan.E0 - 0.897) <= REF_TOL),
        Check(6, "plan(0.17) F", "0.856", f"{plan.F:.6f}", "0.002", abs(plan.F - 0.856) <= REF_TOL),
    ]


def check_n0() -> list[Check]:
    prov = analysis.n0_provenance()
    n0 = prov["sextic_root"]
    return [
        Check(7, "sextic n0", "1.214", f"{n0:.6f}", "0.002", abs(n0 - 1.214) <= REF_TOL),
        Check(7, "empirical E0 vs E_FPT threshold", "reported", f"{prov['empirical_E0_vs_EFPT']:.6f}",
              "-", True, gated=False),
        Check(7, "root of C0+C1+C2", "reported", f"{prov['c_sum_root']:.6f}", "-", True, gated=False),
    ]


def fd_failure_derivative(n: float, b: float, xi: float, h: float = 1e-6) -> float:
    return (failure_probability_closed(n + h, b, xi) - failure_probability_closed(n - h, b, xi)) / (2 * h)


def check_stationarity(b: float = analysis.DEFAULT_B, points: int = 200) -> list[Check]:
    worst = 0.0
    for n in analysis.default_grid(b, points):
        worst = max(worst, abs(fd_failure_derivative(n, b, analysis.optimal_xi(n, b))))
    return [Check(8, "max |dP/dn| at xi_opt", "0", f"{worst:.3e}", "1e-6", worst <= EPS_NUM)]


def check_multiparty(seed: int = DEFAULT_SEED, parties=(2, 3, 4)) -> list[Check]:
    rng = SplitMix64(seed)
    worst_ppt, worst_S, worst_F, bits_ok = np.inf, 0.0, 0.0, True
    xi = 0.17
    plan = analysis.plan_for_xi(xi)
    p = params_from_nb(plan.n, analysis.DEFAULT_B, xi)
    g0 = GateSpec(xi)
    det_spec, det_angles = deterministic_config(g0)
    fpt_spec, fpt_angles = fpt_config(g0, 0.793)
    configs = [
        (det_spec, dict(angles=det_angles)),
        (fpt_spec, dict(angles=fpt_angles)),
        (p.resource(), dict(improved=p)),
    ]
    for N in parties:
        axes = tuple(rng.random_axis() for _ in range(N))
        raw = np.abs([rng.normal_pair()[0] for _ in range(4)])
        lam = ResourceSpec(tuple(raw / np.linalg.norm(raw)))
        for res in (lam, p.resource()):
            spec = MultipartySpec(N, res, axes)
            state = build_quasi_ghz(spec)
            for pair in itertools.combinations(state.labels, 2):
                worst_ppt = min(worst_ppt, pairwise_separability(state, pair)[0])
            h = binary_entropy(res.H)
            for cut in partner_cuts(spec):
                worst_S = max(worst_S, abs(bipartition_entropy(state, cut) - h))
        for res, kw in configs:
            a_bi, b_bi = rng.random_axis(), rng.random_axis()
            g = GateSpec(xi, a_bi, b_bi)
            if "improved" in kw:
                F_bi = run_improved_protocol(p, g, rng.random_state(("A", "B"))).F
            else:
                F_bi = run_general_protocol(res, kw["angles"], g, rng.random_state(("A", "B"))).F
            for charlie in (False, True):
                spec = MultipartySpec(N, res, axes, rng.random_axis(), charlie)
                rep = run_multiparty_protocol(spec, xi, rng.random_state(spec.targets), **kw)
                worst_F = max(worst_F, abs(rep.F - F_bi))
                bits_ok &= rep.classical_bits == 2 * N
    return [
        Check(9, "min pairwise PPT eigenvalue", ">= 0", f"{worst_ppt:.3e}", "1e-12", worst_ppt >= -EPS_ALG),
        Check(9, "bipartition entropy vs h(H)", "0", f"{worst_S:.3e}", "1e-12", worst_S <= EPS_ALG),
        Check(9, "multiparty F vs bipartite F", "0", f"{worst_F:.3e}", "1e-10", worst_F <= EPS_SIM),
        Check(9, "classical bits", "2N", "2N" if bits_ok else "mismatch", "exact", bits_ok),
    ]


def check_asymptote() -> list[Check]:
    plans = [analysis.plan_for_xi(x) for x in (0.05, 0.02, 0.01)]
    F = [pl.F for pl in plans]
    E = [pl.E0 for pl in plans]
    f_ok = all(F[i] < F[i + 1] < 1 for i in range(2))
    e_ok = all(0 < E[i + 1] < E[i] for i in range(2))
    return [
        Check(10, "F increasing as xi -> 0", "increasing", ", ".join(f"{f:.4f}" for f in F), "strict", f_ok),
        Check(10, "E0 decreasing as xi -> 0", "decreasing", ", ".join(f"{e:.4f}" for e in E), "strict", e_ok),
    ]


CRITERIA: dict[int, Callable[[], list[Check]]] = {
    1: check_deterministic,
    2: check_fpt,
    3: check_smallxi,
    4: check_improved,
    5: check_figure,
    6: check_point,
    7: check_n0,
    8: check_stationarity,
    9: check_multiparty,
    10: check_asymptote,
}


def verify_all(echo: Callable[[str], None] | None = print) -> list[Check]:
    results = []
    for number, fn in CRITERIA.items():
        for chk in fn():
            results.append(chk)
            if echo is not None:
                echo(chk.line())
    return results


def all_passed(results: list[Check]) -> bool:
    return all(c.passed for c in results if c.gated)
