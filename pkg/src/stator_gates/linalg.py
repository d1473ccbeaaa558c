"""Dense few-qubit linear algebra on labelled registers.

Amplitude index ``i`` of a :class:`StateVector` is big-endian over
``labels``: the first label is the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# algebraic identities, simulated-vs-closed-form, optimizer outputs
EPS_ALG = 1e-12
EPS_SIM = 1e-10
EPS_NUM = 1e-6
# probabilities below this mark a branch as absent
EPS_ABSENT = 1e-14

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


@dataclass(frozen=True)
class StateVector:
    """Pure state (possibly unnormalized mid-protocol) over labelled qubits."""

    labels: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate qubit labels in {labels}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(labels):
            raise ValueError(
                f"{amps.size} amplitudes for {len(labels)} qubits"
            )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.labels, self.amplitudes / nrm)

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(
            self.labels + other.labels, np.kron(self.amplitudes, other.amplitudes)
        )

    def reorder(self, labels: Sequence[str]) -> "StateVector":
        """Same state with qubits permuted into ``labels`` order."""
        labels = tuple(labels)
        if sorted(labels) != sorted(self.labels):
            raise ValueError(f"{labels} is not a permutation of {self.labels}")
        perm = [self.labels.index(l) for l in labels]
        psi = self.amplitudes.reshape((2,) * self.num_qubits).transpose(perm)
        return StateVector(labels, psi.reshape(-1))

    @classmethod
    def basis(cls, labels: Sequence[str], bits: str | int) -> "StateVector":
        labels = tuple(labels)
        idx = int(bits, 2) if isinstance(bits, str) else int(bits)
        amps = np.zeros(2 ** len(labels), dtype=complex)
        amps[idx] = 1.0
        return cls(labels, amps)

    @classmethod
    def from_terms(cls, labels: Sequence[str], terms: dict[str, complex]) -> "StateVector":
        """Build from ``{"010": amplitude, ...}`` bit strings (no normalization)."""
        labels = tuple(labels)
        amps = np.zeros(2 ** len(labels), dtype=complex)
        for bits, amp in terms.items():
            if len(bits) != len(labels):
                raise ValueError(f"bit string {bits!r} does not match {labels}")
            amps[int(bits, 2)] += amp
        return cls(labels, amps)


@dataclass(frozen=True)
class PauliAxis:
    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        if abs(self.nx**2 + self.ny**2 + self.nz**2 - 1) > EPS_ALG:
            raise ValueError(f"axis {self.as_tuple()} is not a unit vector")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.nx, self.ny, self.nz)

    @classmethod
    def normalize(cls, x: float, y: float, z: float) -> "PauliAxis":
        r = float(np.sqrt(x * x + y * y + z * z))
        if r == 0:
            raise ValueError("zero axis")
        return cls(x / r, y / r, z / r)


Z_AXIS = PauliAxis(0.0, 0.0, 1.0)


def pauli_axis_matrix(axis: PauliAxis) -> np.ndarray:
    """``nx σx + ny σy + nz σz``."""
    if not isinstance(axis, PauliAxis):
        axis = PauliAxis(*axis)
    return axis.nx * SX + axis.ny * SY + axis.nz * SZ


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def is_unitary(U: np.ndarray, tol: float = EPS_ALG) -> bool:
    U = np.asarray(U)
    return bool(np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=tol, rtol=0))


def _target_axes(state: StateVector, targets: Sequence[str]) -> list[int]:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {targets}")
    missing = [t for t in targets if t not in state.labels]
    if missing:
        raise ValueError(f"unknown qubit labels {missing}; register is {state.labels}")
    return [state.labels.index(t) for t in targets]


def apply_operator(state: StateVector, M: np.ndarray, targets: Sequence[str]) -> StateVector:
    """Apply an arbitrary matrix on ``targets``; no checks on M, no renormalization."""
    axes = _target_axes(state, targets)
    k = len(axes)
    M = np.asarray(M, dtype=complex)
    if M.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {M.shape} does not act on {k} qubits")
    n = state.num_qubits
    psi = state.amplitudes.reshape((2,) * n)
    out = np.tensordot(M.reshape((2,) * (2 * k)), psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the new target axes first; move them back in place
    rest = [i for i in range(n) if i not in axes]
    order = np.empty(n, dtype=int)
    for pos, ax in enumerate(axes):
        order[ax] = pos
    for pos, ax in enumerate(rest):
        order[ax] = k + pos
    out = out.transpose(order)
    return StateVector(state.labels, out.reshape(-1))


def apply_gate(state: StateVector, U: np.ndarray, targets: Sequence[str]) -> StateVector:
    if not is_unitary(U):
        raise ValueError("gate is not unitary")
    return apply_operator(state, U, targets)


def apply_kraus(
    state: StateVector, M: np.ndarray, targets: Sequence[str]
) -> tuple[float, StateVector | None]:
    """Return ``(‖M ψ‖², M ψ / ‖M ψ‖)``; the state is ``None`` if the outcome is absent."""
    out = apply_operator(state, M, targets)
    p = out.norm() ** 2
    if p < EPS_ABSENT:
        return p, None
    return p, out.normalized()


def project_out(state: StateVector, bra: np.ndarray, targets: Sequence[str]) -> StateVector:
    """Contract ``⟨bra|`` on ``targets`` and drop those qubits (unnormalized)."""
    axes = _target_axes(state, targets)
    k = len(axes)
    bra = np.asarray(bra, dtype=complex).reshape(-1)
    if bra.size != 2**k:
        raise ValueError(f"basis vector of size {bra.size} for {k} qubits")
    psi = state.amplitudes.reshape((2,) * state.num_qubits)
    out = np.tensordot(bra.conj().reshape((2,) * k), psi, axes=(list(range(k)), axes))
    labels = tuple(l for l in state.labels if l not in targets)
    return StateVector(labels, np.asarray(out).reshape(-1))


def check_basis(basis: Sequence[np.ndarray], k: int, tol: float = EPS_SIM) -> np.ndarray:
    B = np.array([np.asarray(v, dtype=complex).reshape(-1) for v in basis])
    if B.shape != (2**k, 2**k):
        raise ValueError(f"need {2**k} basis vectors of length {2**k}, got {B.shape}")
    if not np.allclose(B.conj() @ B.T, np.eye(2**k), atol=tol, rtol=0):
        raise ValueError("measurement basis is not orthonormal")
    return B


def projective_measure(
    state: StateVector, basis: Sequence[np.ndarray | StateVector], targets: Sequence[str]
) -> list[tuple[float, StateVector | None]]:
    """Measure ``targets`` in an orthonormal basis; measured qubits are removed.

    One ``(probability, post_state)`` per basis vector, in basis order.
    """
    vecs = [v.amplitudes if isinstance(v, StateVector) else v for v in basis]
    B = check_basis(vecs, len(targets))
    results = []
    for v in B:
        out = project_out(state, v, targets)
        p = out.norm() ** 2
        results.append((p, out.normalized() if p >= EPS_ABSENT else None))
    return results


def reduced_density_matrix(state: StateVector, keep: Sequence[str]) -> np.ndarray:
    """Partial trace onto ``keep`` (in the order given)."""
    keep = list(keep)
    axes = _target_axes(state, keep)
    n = state.num_qubits
    rest = [i for i in range(n) if i not in axes]
    psi = state.amplitudes.reshape((2,) * n).transpose(axes + rest)
    psi = psi.reshape(2 ** len(keep), -1)
    rho = psi @ psi.conj().T
    return rho / np.trace(rho).real


def _check_density(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"not a square matrix: {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=EPS_ALG, rtol=0):
        raise ValueError("density matrix is not Hermitian")
    return rho


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in ebits (base 2), with 0 log 0 = 0."""
    rho = _check_density(rho)
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > EPS_ABSENT]
    s = float(-np.sum(evals * np.log2(evals)))
    return max(s, 0.0)


def binary_entropy(p: float) -> float:
    if not -EPS_ALG <= p <= 1 + EPS_ALG:
        raise ValueError(f"probability {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def distance_up_to_phase(A: np.ndarray, B: np.ndarray) -> float:
    """``1 - |tr(A†B)| / (‖A‖_F ‖B‖_F)``; zero iff A is a nonzero multiple of B."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    na, nb = np.linalg.norm(A), np.linalg.norm(B)
    if na == 0 or nb == 0:
        raise ValueError("zero operator")
    overlap = abs(np.vdot(A, B)) / (na * nb)
    return float(min(max(1.0 - overlap, 0.0), 1.0))


def partial_transpose_second(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def ppt_min_eigenvalue(rho: np.ndarray) -> float:
    """Smallest eigenvalue of the partial transpose of a two-qubit state.

    Non-negative (to numerical tolerance) iff the state is separable.
    """
    rho = _check_density(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a two-qubit density matrix, got {rho.shape}")
    return float(np.linalg.eigvalsh(partial_transpose_second(rho)).min())
