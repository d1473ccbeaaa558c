"""Bipartite nonlocal gate exp(iξ σ_nA σ_nB) from one shared three-qubit state.

Alice holds ancilla ``a``, Bob holds ``b0`` and ``b1``. The shared state is

    λ0|000⟩ + λ1|001⟩ + λ2|110⟩ + λ3|111⟩     (order a, b0, b1)

and the consumed entanglement is h(λ0² + λ1²).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    EPS_ALG,
    Z_AXIS,
    PauliAxis,
    StateVector,
    binary_entropy,
    pauli_axis_matrix,
)
from .stator import (
    BASIS_NAMES,
    Coupling,
    MeasurementAngles,
    ProtocolReport,
    StatorCircuit,
    simulate,
    target_operator,
)

ANCILLAS = ("a", "b0", "b1")
TARGETS = ("A", "B")


@dataclass(frozen=True)
class ResourceSpec:
    lam: tuple[float, float, float, float]

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        if len(lam) != 4:
            raise ValueError("need four coefficients")
        if min(lam) < 0:
            raise ValueError(f"negative coefficient in {lam}")
        if abs(sum(x * x for x in lam) - 1) > EPS_ALG:
            raise ValueError(f"coefficients {lam} are not normalized")
        object.__setattr__(self, "lam", lam)

    @property
    def H(self) -> float:
        return self.lam[0] ** 2 + self.lam[1] ** 2


@dataclass(frozen=True)
class GateSpec:
    xi: float
    axis_a: PauliAxis = field(default=Z_AXIS)
    axis_b: PauliAxis = field(default=Z_AXIS)

    def __post_init__(self):
        if not -EPS_ALG <= self.xi <= np.pi / 4 + EPS_ALG:
            raise ValueError(f"xi={self.xi} outside [0, pi/4]")

    @property
    def paulis(self) -> tuple[np.ndarray, np.ndarray]:
        return pauli_axis_matrix(self.axis_a), pauli_axis_matrix(self.axis_b)


def build_resource_state(spec: ResourceSpec) -> StateVector:
    l0, l1, l2, l3 = spec.lam
    return StateVector.from_terms(
        ANCILLAS, {"000": l0, "001": l1, "110": l2, "111": l3}
    )


def target_gate(g: GateSpec) -> np.ndarray:
    return target_operator(g.xi, g.paulis)


def resource_entanglement(spec: ResourceSpec) -> float:
    return binary_entropy(spec.H)


def general_circuit(
    spec: ResourceSpec,
    g: GateSpec,
    angles: MeasurementAngles | None = None,
    povm: tuple[np.ndarray, np.ndarray] | None = None,
    angle_rule=None,
) -> StatorCircuit:
    sa, sb = g.paulis
    if angle_rule is None:
        if angles is None:
            raise ValueError("need measurement angles")
        angle_rule = lambda path: angles  # noqa: E731
    return StatorCircuit(
        resource=build_resource_state(spec),
        targets=TARGETS,
        paulis=(sa, sb),
        couplings=(Coupling("a", "A", sa, 1j), Coupling("b1", "B", sb, 1.0)),
        sx_labels=("a",),
        pair=("b0", "b1"),
        angle_rule=angle_rule,
        xi=g.xi,
        classical_bits=2,
        entanglement=resource_entanglement(spec),
        povm=povm,
    )


def run_general_protocol(
    spec: ResourceSpec, angles: MeasurementAngles, g: GateSpec, target: StateVector
) -> ProtocolReport:
    return simulate(general_circuit(spec, g, angles), target)


def branch_probabilities(spec: ResourceSpec, angles: MeasurementAngles) -> dict[str, float]:
    """Closed-form probabilities of the four collective outcomes."""
    l0, l1, l2, l3 = spec.lam
    c0, s0 = np.cos(angles.delta0) ** 2, np.sin(angles.delta0) ** 2
    c1, s1 = np.cos(angles.delta1) ** 2, np.sin(angles.delta1) ** 2
    probs = {
        "B00": l0**2 * c0 + l3**2 * s0,
        "B01": l0**2 * s0 + l3**2 * c0,
        "B10": l1**2 * c1 + l2**2 * s1,
        "B11": l1**2 * s1 + l2**2 * c1,
    }
    return {k: float(v) for k, v in probs.items()}


def branch_operator_closed_form(
    spec: ResourceSpec, angles: MeasurementAngles, g: GateSpec, which: str
) -> np.ndarray:
    """Unnormalized ``x I⊗I + i y σ_nA⊗σ_nB`` left after outcome ``which``."""
    l0, l1, l2, l3 = spec.lam
    d0, d1 = angles.delta0, angles.delta1
    coeffs = {
        "B00": (l0 * np.cos(d0), l3 * np.sin(d0)),
        "B01": (l3 * np.cos(d0), l0 * np.sin(d0)),
        "B10": (l1 * np.cos(d1), l2 * np.sin(d1)),
        "B11": (l2 * np.cos(d1), l1 * np.sin(d1)),
    }
    if which not in coeffs:
        raise ValueError(f"unknown outcome {which!r}; expected one of {BASIS_NAMES}")
    x, y = coeffs[which]
    sa, sb = g.paulis
    return x * np.eye(4) + 1j * y * np.kron(sa, sb)


def deterministic_config(g: GateSpec) -> tuple[ResourceSpec, MeasurementAngles]:
    """Equal coefficients and δ0 = δ1 = ξ: every outcome succeeds, at one ebit."""
    return ResourceSpec((0.5, 0.5, 0.5, 0.5)), MeasurementAngles(g.xi, g.xi)


def fpt_config(g: GateSpec, F_target: float) -> tuple[ResourceSpec, MeasurementAngles]:
    """Success probability ``F_target = 2 λ0²`` using only the B00/B01 outcomes.

    δ1 = 0 leaves B10 empty and sends the remaining weight to the B11 failure.
    """
    if not 0 < F_target <= 1:
        raise ValueError(f"F_target={F_target} outside (0, 1]")
    l0 = np.sqrt(F_target / 2)
    l2 = np.sqrt(max(1 - F_target, 0.0))
    return ResourceSpec((l0, 0.0, l2, l0)), MeasurementAngles(g.xi, 0.0)


def fpt_entanglement(F: float) -> float:
    return binary_entropy(F / 2)


def optimal_alpha(g: GateSpec) -> float:
    return float(np.arctan(np.sqrt(np.tan(g.xi))))


def smallxi_config(g: GateSpec, alpha: float) -> tuple[ResourceSpec, MeasurementAngles]:
    """λ = (0, cos α, sin α, 0) with tan α tan δ1 = tan ξ; B10 is the success outcome."""
    if not 0 < alpha < np.pi / 2:
        raise ValueError(f"alpha={alpha} outside (0, pi/2)")
    if g.xi <= 0:
        raise ValueError("xi = 0 forces delta1 = 0; B10 then has probability cos^2(alpha) < 1")
    delta1 = float(np.arctan(np.tan(g.xi) / np.tan(alpha)))
    spec = ResourceSpec((0.0, float(np.cos(alpha)), float(np.sin(alpha)), 0.0))
    return spec, MeasurementAngles(0.0, delta1)


def smallxi_success_closed(xi: float, alpha: float) -> float:
    """P(B10) with δ1 tied to α; bounded by 1/(1 + sin 2ξ)."""
    t = np.tan(xi)
    return float(1 / np.cos(xi) ** 2 / (1 / np.cos(alpha) ** 2 + t**2 / np.sin(alpha) ** 2))


def smallxi_entanglement(xi: float) -> float:
    t = np.tan(xi)
    return binary_entropy(1 / (1 + t))
