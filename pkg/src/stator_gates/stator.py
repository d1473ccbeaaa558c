"""Exhaustive branch simulation of stator-type gate protocols.

A protocol is described by a :class:`StatorCircuit`: a resource state on
ancilla qubits, controlled Paulis coupling ancillas to the remote targets,
σx measurements of the partners' ancillas, and a final collective
measurement of a two-qubit ancilla pair (optionally preceded by a
diagonal POVM and a CNOT on that pair).

Every measurement outcome is kept. The circuit is run twice: once on the
caller's target state and once on a maximally entangled copy of the
targets with reference qubits, which yields each branch's conditional
operator in a single pass.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import (
    CNOT,
    EPS_ABSENT,
    EPS_ALG,
    EPS_SIM,
    I2,
    SZ,
    StateVector,
    apply_gate,
    apply_operator,
    distance_up_to_phase,
    kron_all,
    project_out,
)

log = logging.getLogger(__name__)

BASIS_NAMES = ("B00", "B01", "B10", "B11")
_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class MeasurementAngles:
    delta0: float
    delta1: float

    def __post_init__(self):
        for d in (self.delta0, self.delta1):
            if not -EPS_ALG <= d <= np.pi / 2 + EPS_ALG:
                raise ValueError(f"basis angle {d} outside [0, pi/2]")


def collective_basis(angles: MeasurementAngles) -> list[np.ndarray]:
    """The four vectors B00, B01, B10, B11 on an ordered qubit pair."""
    c0, s0 = np.cos(angles.delta0), np.sin(angles.delta0)
    c1, s1 = np.cos(angles.delta1), np.sin(angles.delta1)
    return [
        np.array([c0, 0, 0, s0], dtype=complex),
        np.array([-s0, 0, 0, c0], dtype=complex),
        np.array([0, c1, s1, 0], dtype=complex),
        np.array([0, -s1, c1, 0], dtype=complex),
    ]


def controlled(U: np.ndarray, phase: complex = 1.0) -> np.ndarray:
    """``|0⟩⟨0| ⊗ I + phase |1⟩⟨1| ⊗ U`` with the control first."""
    d = U.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    out[:d, :d] = np.eye(d)
    out[d:, d:] = phase * U
    return out


def target_operator(xi: float, paulis: Sequence[np.ndarray]) -> np.ndarray:
    """``exp(i ξ σ⊗...⊗σ) = cos ξ I + i sin ξ σ⊗...⊗σ``."""
    P = kron_all(paulis)
    return np.cos(xi) * np.eye(P.shape[0]) + 1j * np.sin(xi) * P


def stator_form_distance(K: np.ndarray, P: np.ndarray) -> float:
    """Phase-insensitive distance from K to the nearest ``a I + i b P`` with a, b >= 0.

    P must be a Hermitian involution orthogonal to I (a Pauli product).
    """
    d = K.shape[0]
    nk = np.linalg.norm(K)
    if nk == 0:
        raise ValueError("zero operator")
    u = np.trace(K) / d
    v = -1j * np.trace(P @ K) / d
    # maximise |a u + b v| over the quarter circle a, b >= 0
    uu, vv, uv = abs(u) ** 2, abs(v) ** 2, (u * np.conj(v)).real
    if uv >= 0:
        best = 0.5 * (uu + vv) + np.sqrt(0.25 * (uu - vv) ** 2 + uv**2)
    else:
        best = max(uu, vv)
    overlap = np.sqrt(d * best) / nk
    return float(min(max(1.0 - overlap, 0.0), 1.0))


@dataclass(frozen=True)
class Coupling:
    """Controlled Pauli from an ancilla onto a remote target, ``|0⟩⟨0|⊗I + phase|1⟩⟨1|⊗σ``."""

    control: str
    target: str
    pauli: np.ndarray
    phase: complex = 1.0


@dataclass(frozen=True)
class BranchRecord:
    path: tuple[tuple[str, str], ...]
    probability: float
    conditional_operator: np.ndarray
    success: bool
    distance: float
    post_state: StateVector | None = None

    def outcome(self, key: str) -> str | None:
        for k, v in self.path:
            if k == key:
                return v
        return None


@dataclass
class ProtocolReport:
    branches: list[BranchRecord]
    F: float
    E: float
    classical_bits: int
    sigma_x_convention: str = "minus"
    target_labels: tuple[str, ...] = ()

    @property
    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))

    def probability_where(self, **outcomes: str) -> float:
        """Joint probability of all branches matching the given path outcomes."""
        total = 0.0
        for b in self.branches:
            if all(b.outcome(k) == v for k, v in outcomes.items()):
                total += b.probability
        return total

    def basis_probabilities(self) -> dict[str, float]:
        return {name: self.probability_where(basis=name) for name in BASIS_NAMES}


AngleRule = Callable[[tuple[tuple[str, str], ...]], MeasurementAngles]


@dataclass(frozen=True)
class StatorCircuit:
    resource: StateVector
    targets: tuple[str, ...]
    paulis: tuple[np.ndarray, ...]
    couplings: tuple[Coupling, ...]
    sx_labels: tuple[str, ...]
    pair: tuple[str, str]
    angle_rule: AngleRule
    xi: float
    classical_bits: int
    entanglement: float
    povm: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def pauli_product(self) -> np.ndarray:
        return kron_all(self.paulis)


@dataclass(frozen=True)
class _Branch:
    path: tuple[tuple[str, str], ...]
    state: StateVector


def _choi_input(targets: Sequence[str]) -> tuple[StateVector, tuple[str, ...]]:
    refs = tuple(f"ref:{t}" for t in targets)
    d = 2 ** len(targets)
    amps = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return StateVector(tuple(targets) + refs, amps), refs


def _front(circ: StatorCircuit, state: StateVector, convention: str) -> list[_Branch]:
    """Everything up to (and including) the σx measurements."""
    branches = [_Branch((), state)]
    c0, c1 = circ.pair
    if circ.povm is not None:
        M0, M1 = circ.povm
        split = []
        for br in branches:
            split.append(_Branch(br.path + (("povm", "M0"),), apply_operator(br.state, M0, [c0])))
            s1 = apply_operator(br.state, M1, [c0])
            s1 = apply_gate(s1, CNOT, [c0, c1])
            split.append(_Branch(br.path + (("povm", "M1"),), s1))
        branches = split
    for cp in circ.couplings:
        U = controlled(cp.pauli, cp.phase)
        branches = [_Branch(br.path, apply_gate(br.state, U, [cp.control, cp.target])) for br in branches]
    fix_on = "-" if convention == "minus" else "+"
    for label in circ.sx_labels:
        split = []
        for br in branches:
            for name, vec in (("+", _PLUS), ("-", _MINUS)):
                s = project_out(br.state, vec, [label])
                if name == fix_on:
                    s = apply_gate(s, SZ, [c0])
                split.append(_Branch(br.path + ((f"sx:{label}", name),), s))
        branches = split
    return branches


def _back(circ: StatorCircuit, branches: list[_Branch]) -> list[_Branch]:
    out = []
    for br in branches:
        basis = collective_basis(circ.angle_rule(br.path))
        for name, vec in zip(BASIS_NAMES, basis):
            s = project_out(br.state, vec, list(circ.pair))
            out.append(_Branch(br.path + (("basis", name),), s))
    return out


def _stator_consistent(branches: list[_Branch]) -> bool:
    """σx outcomes that differ only in sign must leave identical stators."""
    groups: dict[tuple, list[np.ndarray]] = {}
    for br in branches:
        key = tuple(kv for kv in br.path if not kv[0].startswith("sx:"))
        groups.setdefault(key, []).append(br.state.amplitudes)
    return all(
        np.allclose(a, g[0], atol=EPS_SIM, rtol=0) for g in groups.values() for a in g[1:]
    )


def correction_candidates(targets: Sequence[str]) -> list[tuple[str, ...]]:
    """Subsets of parties applying their σ, ordered by size then position."""
    out = []
    for r in range(len(targets) + 1):
        out.extend(itertools.combinations(targets, r))
    return out


def correction_name(subset: Sequence[str]) -> str:
    return "+".join(subset) if subset else "I"


def _correction_matrix(circ: StatorCircuit, subset: Sequence[str]) -> np.ndarray:
    return kron_all(p if t in subset else I2 for t, p in zip(circ.targets, circ.paulis))


def choose_correction(circ: StatorCircuit, K: np.ndarray) -> tuple[tuple[str, ...], float]:
    """Pick the σ-correction bringing K closest to ``a I + i b σ⊗σ``.

    A pure ``I`` or pure ``σ⊗σ`` operator has the right form under two
    corrections; such ties go to the one nearer the target gate, then to
    the first candidate.
    """
    P = circ.pauli_product
    U = target_operator(circ.xi, circ.paulis)
    scored = []
    for subset in correction_candidates(circ.targets):
        CK = _correction_matrix(circ, subset) @ K
        scored.append((stator_form_distance(CK, P), distance_up_to_phase(CK, U), subset))
    floor = min(s[0] for s in scored)
    tied = [s for s in scored if s[0] <= floor + EPS_ALG]
    d_form, _, best = min(tied, key=lambda s: s[1])
    return best, d_form


def simulate(circ: StatorCircuit, target: StateVector) -> ProtocolReport:
    """Enumerate every outcome path of the circuit on ``target``."""
    if tuple(target.labels) != circ.targets:
        target = target.reorder(circ.targets)
    if abs(target.norm() - 1) > EPS_ALG:
        raise ValueError("target state is not normalized")
    choi, refs = _choi_input(circ.targets)
    d = 2 ** len(circ.targets)

    convention = "minus"
    front = _front(circ, circ.resource.tensor(choi), convention)
    if not _stator_consistent(front):
        convention = "plus"
        front = _front(circ, circ.resource.tensor(choi), convention)
        log.warning("sigma_x correction convention swapped to %s", convention)
    choi_branches = _back(circ, front)
    tgt_branches = {
        br.path: br.state for br in _back(circ, _front(circ, circ.resource.tensor(target), convention))
    }

    U = target_operator(circ.xi, circ.paulis)
    order = circ.targets + refs
    records = []
    for br in choi_branches:
        if br.state.norm() ** 2 < EPS_ABSENT:
            continue
        K = np.sqrt(d) * br.state.reorder(order).amplitudes.reshape(d, d)
        subset, _ = choose_correction(circ, K)
        C = _correction_matrix(circ, subset)
        K = C @ K
        post = apply_operator(tgt_branches[br.path], C, list(circ.targets))
        p = post.norm() ** 2
        dist = distance_up_to_phase(K, U)
        records.append(
            BranchRecord(
                path=br.path + (("correction", correction_name(subset)),),
                probability=p,
                conditional_operator=K,
                success=dist <= EPS_SIM,
                distance=dist,
                post_state=post.normalized() if p >= EPS_ABSENT else None,
            )
        )
    F = float(sum(r.probability for r in records if r.success))
    return ProtocolReport(
        branches=records,
        F=F,
        E=circ.entanglement,
        classical_bits=circ.classical_bits,
        sigma_x_convention=convention,
        target_labels=circ.targets,
    )
