"""Quasi-GHZ resource and Charlie-mediated gates between unentangled partners.

Partners A1..AN each hold one ancilla ``a_i``; Charlie holds ``c0, c1``:

    λ0|0..0 00⟩ + λ1|0..0 01⟩ + λ2|1..1 10⟩ + λ3|1..1 11⟩

Each partner couples a_i to its target with a controlled σ (A1's carries
the factor i), measures σx and reports to Charlie, who fixes the sign on
c0, measures (c0, c1) collectively and broadcasts the correction. With the
optional Charlie target C coupled to c0 the realized gate is
exp(iξ σ_A1 ⊗ ... ⊗ σ_AN ⊗ σ_C).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .improved import ImprovedParams, angle_rule, povm_elements
from .linalg import (
    EPS_SIM,
    Z_AXIS,
    PauliAxis,
    StateVector,
    binary_entropy,
    pauli_axis_matrix,
    ppt_min_eigenvalue,
    reduced_density_matrix,
    von_neumann_entropy,
)
from .protocol import ResourceSpec
from .stator import Coupling, MeasurementAngles, ProtocolReport, StatorCircuit, simulate

MAX_PARTIES = 8


@dataclass(frozen=True)
class MultipartySpec:
    N: int
    lam: ResourceSpec
    axes: tuple[PauliAxis, ...] = ()
    charlie_axis: PauliAxis = field(default=Z_AXIS)
    include_charlie_target: bool = False
    max_parties: int = MAX_PARTIES

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N={self.N}; need at least two partners")
        if self.N > self.max_parties:
            raise ValueError(f"N={self.N} exceeds the cap of {self.max_parties}")
        axes = tuple(self.axes) or (Z_AXIS,) * self.N
        if len(axes) != self.N:
            raise ValueError(f"{len(axes)} axes for {self.N} partners")
        object.__setattr__(self, "axes", axes)

    @property
    def ancillas(self) -> tuple[str, ...]:
        return tuple(f"a{i}" for i in range(1, self.N + 1)) + ("c0", "c1")

    @property
    def targets(self) -> tuple[str, ...]:
        t = tuple(f"A{i}" for i in range(1, self.N + 1))
        return t + ("C",) if self.include_charlie_target else t

    @property
    def partners(self) -> dict[str, tuple[str, ...]]:
        """Ancilla labels held by each party."""
        out = {f"A{i}": (f"a{i}",) for i in range(1, self.N + 1)}
        out["C"] = ("c0", "c1")
        return out


def build_quasi_ghz(spec: MultipartySpec) -> StateVector:
    l0, l1, l2, l3 = spec.lam.lam
    zeros, ones = "0" * spec.N, "1" * spec.N
    return StateVector.from_terms(
        spec.ancillas,
        {zeros + "00": l0, zeros + "01": l1, ones + "10": l2, ones + "11": l3},
    )


def multiparty_circuit(
    spec: MultipartySpec,
    xi: float,
    angles: MeasurementAngles | None = None,
    improved: ImprovedParams | None = None,
) -> StatorCircuit:
    if not 0 < xi <= np.pi / 4 + 1e-12:
        raise ValueError(f"xi={xi} outside (0, pi/4]")
    paulis = [pauli_axis_matrix(ax) for ax in spec.axes]
    couplings = [
        Coupling(f"a{i + 1}", f"A{i + 1}", p, 1j if i == 0 else 1.0) for i, p in enumerate(paulis)
    ]
    if spec.include_charlie_target:
        pc = pauli_axis_matrix(spec.charlie_axis)
        paulis.append(pc)
        couplings.append(Coupling("c0", "C", pc, 1.0))
    povm = None
    if improved is not None:
        expected = improved.resource().lam
        if not np.allclose(spec.lam.lam, expected, atol=1e-12, rtol=0):
            raise ValueError("resource coefficients do not match the POVM parameters")
        povm = povm_elements(improved.theta0, improved.theta1)
        rule = angle_rule(improved)
    elif angles is not None:
        rule = lambda path: angles  # noqa: E731
    else:
        raise ValueError("need either measurement angles or improved parameters")
    return StatorCircuit(
        resource=build_quasi_ghz(spec),
        targets=spec.targets,
        paulis=tuple(paulis),
        couplings=tuple(couplings),
        sx_labels=spec.ancillas[: spec.N],
        pair=("c0", "c1"),
        angle_rule=rule,
        xi=xi,
        classical_bits=2 * spec.N,
        entanglement=binary_entropy(spec.lam.H),
        povm=povm,
    )


def run_multiparty_protocol(
    spec: MultipartySpec,
    xi: float,
    target: StateVector,
    angles: MeasurementAngles | None = None,
    improved: ImprovedParams | None = None,
) -> ProtocolReport:
    return simulate(multiparty_circuit(spec, xi, angles, improved), target)


def pairwise_separability(state: StateVector, pair: tuple[str, str]) -> tuple[float, bool]:
    if len(pair) != 2 or pair[0] == pair[1]:
        raise ValueError(f"need two distinct labels, got {pair}")
    lam_min = ppt_min_eigenvalue(reduced_density_matrix(state, list(pair)))
    return lam_min, lam_min >= -EPS_SIM


def bipartition_entropy(state: StateVector, part) -> float:
    part = list(part)
    if not part or len(part) >= state.num_qubits or not set(part) <= set(state.labels):
        raise ValueError(f"{part} is not a nonempty strict subset of {state.labels}")
    return von_neumann_entropy(reduced_density_matrix(state, part))


def partner_cuts(spec: MultipartySpec) -> list[tuple[str, ...]]:
    """Ancilla sets of every bipartition that keeps each party on one side."""
    parties = list(spec.partners)
    cuts = []
    for r in range(1, len(parties)):
        for group in itertools.combinations(parties, r):
            if parties[0] not in group:
                continue  # each cut once
            cuts.append(tuple(q for p in group for q in spec.partners[p]))
    return cuts
