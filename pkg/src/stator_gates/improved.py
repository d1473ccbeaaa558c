"""POVM-assisted protocol: Bob filters b0 with {M0, M1} before the stator step.

On M0 the renormalized state has the equal-pair structure and every
collective outcome succeeds. On M1 Bob applies CNOT(b0 -> b1) and measures
with δ0 = ξ, tan δ1 = n tan ξ, so only B11 fails.

Parameterization: n = tan²θ0 / tan²θ1 and b = 2 cot²θ0 + 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .linalg import EPS_ALG, StateVector, binary_entropy
from .protocol import GateSpec, ResourceSpec, general_circuit
from .stator import MeasurementAngles, ProtocolReport, simulate

log = logging.getLogger(__name__)

# θ0 -> π/2 as b -> 1; the state construction needs b strictly above 1
B_FLOOR = 1 + 1e-6


@dataclass(frozen=True)
class ImprovedParams:
    n: float
    b: float
    xi: float
    theta0: float
    theta1: float
    delta1: float

    @property
    def angles_m0(self) -> MeasurementAngles:
        return MeasurementAngles(self.xi, self.xi)

    @property
    def angles_m1(self) -> MeasurementAngles:
        return MeasurementAngles(self.xi, self.delta1)

    def resource(self) -> ResourceSpec:
        return coefficients_from_angles(self.theta0, self.theta1)


def coefficients_from_angles(theta0: float, theta1: float) -> ResourceSpec:
    for th in (theta0, theta1):
        if not 0 < th < np.pi / 2:
            raise ValueError(f"angle {th} outside (0, pi/2)")
    t0, t1 = np.tan(theta0), np.tan(theta1)
    c0, c1 = np.cos(theta0), np.cos(theta1)
    norm = np.sqrt((t0**2 + t1**2) * (c0**2 + c1**2))
    lam = np.array([t1 * c1, t0 * c1, t0 * c0, t1 * c0]) / norm
    # absorb the last-ulp normalization error
    lam = lam / np.linalg.norm(lam)
    return ResourceSpec(tuple(lam))


def params_from_nb(n: float, b: float, xi: float) -> ImprovedParams:
    if n <= 0:
        raise ValueError(f"n={n} must be positive")
    if b <= 1:
        raise ValueError(f"b={b} must exceed 1 (theta0 undefined)")
    if not 0 < xi <= np.pi / 4 + EPS_ALG:
        raise ValueError(f"xi={xi} outside (0, pi/4]")
    theta0 = float(np.arctan(1 / np.sqrt((b - 1) / 2)))
    theta1 = float(np.arctan(np.tan(theta0) / np.sqrt(n)))
    delta1 = float(np.arctan(n * np.tan(xi)))
    return ImprovedParams(n, b, xi, theta0, theta1, delta1)


def povm_elements(theta0: float, theta1: float) -> tuple[np.ndarray, np.ndarray]:
    M0 = np.diag([np.cos(theta0), np.cos(theta1)]).astype(complex)
    M1 = np.diag([np.sin(theta0), np.sin(theta1)]).astype(complex)
    return M0, M1


def failure_probability_closed(n: float, b: float, xi: float) -> float:
    """Joint probability of (M1, then B11)."""
    t2 = np.tan(xi) ** 2
    return float((1 + n**4 * t2) / ((1 + n**2 * t2) * (1 + n) * (1 + n * b)))


def failure_probability_amplitudes(p: ImprovedParams) -> float:
    """Same quantity written with the M1-branch amplitudes λ1 sinθ0 and λ3 sinθ1."""
    l0, l1, l2, l3 = p.resource().lam
    return float(
        l1**2 * np.sin(p.theta0) ** 2 * np.sin(p.delta1) ** 2
        + l3**2 * np.sin(p.theta1) ** 2 * np.cos(p.delta1) ** 2
    )


def entanglement_parameter(n: float, b: float) -> float:
    """H = λ0² + λ1² as a function of (n, b); tends to n/(1+n) as b -> 1."""
    return 1 / ((1 - 1 / n) / (1 + 2 / (b - 1)) + 1 + 1 / n)


def angle_rule(p: ImprovedParams):
    def rule(path):
        return p.angles_m1 if ("povm", "M1") in path else p.angles_m0

    return rule


def improved_circuit(p: ImprovedParams, g: GateSpec):
    if abs(p.xi - g.xi) > EPS_ALG:
        raise ValueError(f"params built for xi={p.xi}, gate has xi={g.xi}")
    return general_circuit(
        p.resource(), g, povm=povm_elements(p.theta0, p.theta1), angle_rule=angle_rule(p)
    )


def run_improved_protocol(p: ImprovedParams, g: GateSpec, target: StateVector) -> ProtocolReport:
    if p.b < B_FLOOR:
        log.warning("b=%r below simulation floor; using %r", p.b, B_FLOOR)
        p = params_from_nb(p.n, B_FLOOR, p.xi)
    return simulate(improved_circuit(p, g), target)


def simulated_failure(report: ProtocolReport) -> float:
    return report.probability_where(povm="M1", basis="B11")
