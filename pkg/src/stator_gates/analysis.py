"""Closed-form trade-off between the POVM-assisted protocol and FPT.

For each n the failure probability P(n, b, ξ) is stationary in n at the ξ
solving C0 t² + C1 t + C2 = 0 with t = tan²ξ. Sweeping n traces the curve
(ξ_opt, F, E0, E_FPT), where E0 = h(n/(1+n)) is the b -> 1 entanglement and
E_FPT = h(F/2) is what FPT needs for the same success probability.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import bisect

from .improved import entanglement_parameter, failure_probability_closed
from .linalg import EPS_ALG, binary_entropy

log = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
DEFAULT_B = 1.001
N_MAX = 20.0
GRID_POINTS = 2000


@dataclass(frozen=True)
class CCoeffs:
    C0: float
    C1: float
    C2: float

    def quadratic(self, t: float) -> float:
        return self.C0 * t * t + self.C1 * t + self.C2


@dataclass(frozen=True)
class CurvePoint:
    n: float
    xi_opt: float
    E0: float
    E0_exact: float
    E_FPT: float
    F: float


@dataclass
class Curve:
    b: float
    points: list[CurvePoint]
    skipped: list[tuple[float, str]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    @property
    def xi_monotone_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.column("xi_opt")) < 0))

    @property
    def E0_monotone_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.column("E0")) < 0))


@dataclass(frozen=True)
class Crossings:
    M0: tuple[float, float]  # (n1, E)
    M1: tuple[float, float]  # (n1, F)
    M2: tuple[float, float]  # (n1, ξ)


@dataclass(frozen=True)
class Plan:
    method: str  # "improved" or "fpt"
    xi: float
    n: float | None
    E0: float
    F: float


def c_coefficients(n: float, b: float) -> CCoeffs:
    C0 = (2 + n + n * b) * n**5
    C1 = (2 * n**3 + 3 * n**2 - 4 * n - 3) * n**2 * b + (3 * n**3 + 4 * n**2 - 3 * n - 2) * n
    C2 = -1 - b - 2 * n * b
    return CCoeffs(C0, C1, C2)


def failure_derivative_closed(n: float, b: float, xi: float) -> float:
    """∂P/∂n written through the C-coefficients."""
    t = np.tan(xi) ** 2
    c = c_coefficients(n, b)
    return c.quadratic(t) / ((1 + n * n * t) ** 2 * (1 + n) ** 2 * (1 + n * b) ** 2)


def optimal_xi(n: float, b: float) -> float:
    """ξ at which n minimises the failure probability."""
    c = c_coefficients(n, b)
    disc = c.C1**2 / (4 * c.C0**2) - c.C2 / c.C0
    if c.C0 <= 0 or disc < 0:
        raise ValueError(f"no real root for n={n}, b={b}")
    t = -c.C1 / (2 * c.C0) + np.sqrt(disc)
    if t <= 0:
        raise ValueError(f"no positive root for n={n}, b={b}")
    xi = float(np.arctan(np.sqrt(t)))
    if xi > np.pi / 4 + EPS_ALG:
        raise ValueError(f"optimal xi={xi:.6f} at n={n} lies outside [0, pi/4]")
    return min(xi, np.pi / 4)


def n0_polynomial(n: float) -> float:
    return n**6 + 2 * n**5 + 3 * n**4 - 4 * n**3 - 3 * n**2 - 2 * n - 1


def find_n0(b: float = DEFAULT_B) -> float:
    """Root in (1, 2) of the sextic threshold polynomial.

    The cost crossing with FPT sits elsewhere; :func:`n0_provenance` lists both.

    The polynomial does not depend on ``b``; the argument is kept for symmetry
    with the other (n, b) routines.
    """
    return float(bisect(n0_polynomial, 1.0, 2.0, xtol=ROOT_XTOL))


def c_sum_root(b: float) -> float:
    """Root of C0 + C1 + C2 in n (the ξ = π/4 boundary of the optimizer)."""
    f = lambda n: sum(vars(c_coefficients(n, b)).values())  # noqa: E731
    return float(bisect(f, 0.5, 2.0, xtol=ROOT_XTOL))


def curve_point(n: float, b: float) -> CurvePoint:
    xi = optimal_xi(n, b)
    F = 1 - failure_probability_closed(n, b, xi)
    return CurvePoint(
        n=n,
        xi_opt=xi,
        E0=binary_entropy(n / (1 + n)),
        E0_exact=binary_entropy(entanglement_parameter(n, b)),
        E_FPT=binary_entropy(F / 2),
        F=F,
    )


def default_grid(b: float = DEFAULT_B, points: int = GRID_POINTS, n_max: float = N_MAX) -> np.ndarray:
    return np.geomspace(find_n0(b), n_max, points)


def generate_curve(b: float = DEFAULT_B, n_grid: Iterable[float] | None = None) -> Curve:
    grid = default_grid(b) if n_grid is None else np.sort(np.asarray(list(n_grid), dtype=float))
    points, skipped = [], []
    for n in grid:
        try:
            points.append(curve_point(float(n), b))
        except ValueError as exc:
            log.warning("skipping n=%g: %s", n, exc)
            skipped.append((float(n), str(exc)))
    return Curve(b, points, skipped)


def _gap(n: float, b: float) -> float:
    p = curve_point(n, b)
    return p.E0 - p.E_FPT


def find_crossings(curve: Curve | Sequence[CurvePoint], b: float | None = None) -> Crossings:
    """Locate E0 = E_FPT on the curve and refine it by bisection in n."""
    if isinstance(curve, Curve):
        b = curve.b if b is None else b
        pts = curve.points
    else:
        pts = list(curve)
    if b is None:
        raise ValueError("b is required when passing bare points")
    gap = np.array([p.E0 - p.E_FPT for p in pts])
    flips = np.nonzero(np.sign(gap[:-1]) != np.sign(gap[1:]))[0]
    if len(flips) != 1:
        raise ValueError(f"expected one sign change of E0 - E_FPT, found {len(flips)}")
    i = flips[0]
    n1 = float(bisect(_gap, pts[i].n, pts[i + 1].n, args=(b,), xtol=ROOT_XTOL))
    p = curve_point(n1, b)
    return Crossings(M0=(n1, p.E0), M1=(n1, p.F), M2=(n1, p.xi_opt))


@functools.lru_cache(maxsize=16)
def crossings_for(b: float = DEFAULT_B) -> Crossings:
    return find_crossings(generate_curve(b))


def empirical_threshold(b: float = DEFAULT_B) -> float:
    """n below which the POVM-assisted protocol needs more entanglement than FPT."""
    return crossings_for(b).M0[0]


def n0_provenance(b: float = DEFAULT_B) -> dict[str, float]:
    """Side-by-side candidates for the n0 threshold."""
    return {
        "sextic_root": find_n0(b),
        "c_sum_root": c_sum_root(b),
        "empirical_E0_vs_EFPT": empirical_threshold(b),
    }


def invert_xi(xi: float, b: float, n_low: float) -> float:
    """n >= n_low with optimal_xi(n, b) = xi (ξ_opt decreases in n)."""
    n_high = max(2 * n_low, N_MAX)
    while optimal_xi(n_high, b) > xi:
        n_high *= 2
        if n_high > 1e8:
            raise ValueError(f"xi={xi} too small to invert")
    return float(bisect(lambda n: optimal_xi(n, b) - xi, n_low, n_high, xtol=ROOT_XTOL))


def plan_for_xi(xi: float, b: float = DEFAULT_B) -> Plan:
    """Cheapest plan for the gate: POVM-assisted below the crossing ξ, FPT above it."""
    if not 0 < xi <= np.pi / 4 + EPS_ALG:
        raise ValueError(f"xi={xi} outside (0, pi/4]")
    cr = crossings_for(b)
    n1, xi_m2 = cr.M2
    if xi <= xi_m2:
        n = n1 if xi == xi_m2 else invert_xi(xi, b, n1)
        p = curve_point(n, b)
        return Plan("improved", xi, n, p.E0, p.F)
    return Plan("fpt", xi, None, cr.M0[1], cr.M1[1])
