"""Dense state vectors and gate application.

Qubits are numbered 1..N, left to right as written in kets. Basis index ``i``
stores qubit ``j`` in bit ``j - 1``, so qubit 1 is the least significant bit.
The same convention applies to a gate's local matrix: ``targets[0]`` is the
least significant bit of the local index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

UNITARY_TOL = 1e-12
STATE_TOL = 1e-10


class ValidationError(ValueError):
    """An object violates its numerical invariants."""


class PositionError(IndexError):
    """A qubit position lies outside the register."""


class DegenerateStateError(ValueError):
    """The requested branch carries no probability weight."""


def _check_positions(positions: Sequence[int], n_qubits: int) -> None:
    for q in positions:
        if not 1 <= q <= n_qubits:
            raise PositionError(f"qubit {q} outside 1..{n_qubits}")


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        size = amps.size
        if size < 2 or size & (size - 1):
            raise ValidationError(f"length {size} is not a power of two >= 2")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > STATE_TOL:
            raise ValidationError(f"squared norm {norm!r} differs from 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    def __len__(self):
        return self.amplitudes.size

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True, eq=False)
class Gate:
    """A dense k-qubit unitary bound to ordered target positions.

    ``params`` records whatever defines the gate (e.g. ``a`` and ``b`` for the
    three-qubit compression steps) so circuits can be serialized and rebuilt.
    """

    matrix: np.ndarray
    targets: tuple[int, ...]
    label: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        k = len(targets)
        if k == 0 or len(set(targets)) != k:
            raise ValidationError(f"targets {targets} must be distinct and non-empty")
        if min(targets) < 1:
            raise PositionError(f"targets {targets} must be 1-based")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (1 << k, 1 << k):
            raise ValidationError(f"matrix shape {m.shape} does not match {k} targets")
        err = np.max(np.abs(m.conj().T @ m - np.eye(1 << k)))
        if err > UNITARY_TOL:
            raise ValidationError(f"{self.label}: matrix not unitary (error {err:.3g})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "params", dict(self.params))

    @property
    def arity(self) -> int:
        return len(self.targets)

    def adjoint(self) -> "Gate":
        params = dict(self.params)
        params["adjoint"] = not params.get("adjoint", False)
        return Gate(self.matrix.conj().T, self.targets, self.label, params)

    def unitarity_error(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True, eq=False)
class MCXGate:
    """Multi-controlled NOT with mixed control polarity.

    Flips ``target`` when every positive control is |1> and every negative
    control is |0>. Applied as a basis permutation, so arity is not limited
    by dense-matrix size. A plain CNOT is the case of one positive control.
    """

    positive: tuple[int, ...]
    negative: tuple[int, ...]
    target: int
    label: str = "MCX"

    def __post_init__(self):
        pos = tuple(int(q) for q in self.positive)
        neg = tuple(int(q) for q in self.negative)
        everything = pos + neg + (int(self.target),)
        if len(set(everything)) != len(everything):
            raise ValidationError(f"overlapping positions in {self.label}: {everything}")
        if min(everything) < 1:
            raise PositionError(f"positions {everything} must be 1-based")
        object.__setattr__(self, "positive", pos)
        object.__setattr__(self, "negative", neg)
        object.__setattr__(self, "target", int(self.target))

    @property
    def targets(self) -> tuple[int, ...]:
        return self.positive + self.negative + (self.target,)

    @property
    def arity(self) -> int:
        return len(self.targets)

    @property
    def params(self) -> dict:
        return {"pos": list(self.positive), "neg": list(self.negative), "target": self.target}

    def adjoint(self) -> "MCXGate":
        return self

    def local_permutation(self) -> np.ndarray:
        """Image of every local basis index (targets ordered as ``self.targets``)."""
        k = self.arity
        idx = np.arange(1 << k)
        n_pos = len(self.positive)
        n_neg = len(self.negative)
        pos_mask = (1 << n_pos) - 1
        neg_mask = ((1 << n_neg) - 1) << n_pos
        fire = ((idx & pos_mask) == pos_mask) & ((idx & neg_mask) == 0)
        return np.where(fire, idx ^ (1 << (k - 1)), idx)

    @property
    def matrix(self) -> np.ndarray:
        perm = self.local_permutation()
        m = np.zeros((perm.size, perm.size), dtype=complex)
        m[perm, np.arange(perm.size)] = 1.0
        return m

    def unitarity_error(self) -> float:
        # a permutation matrix is exactly unitary iff the index map is a bijection
        perm = self.local_permutation()
        return 0.0 if np.array_equal(np.sort(perm), np.arange(perm.size)) else 1.0


def cnot(control: int, target: int) -> MCXGate:
    return MCXGate((control,), (), target, label="CX")


def _apply_dense(amps: np.ndarray, n_qubits: int, matrix: np.ndarray, targets) -> np.ndarray:
    # amps has shape (2**n,) or (2**n, batch); C-order axis 0 is qubit n
    batch = amps.shape[1:]
    k = len(targets)
    psi = amps.reshape((2,) * n_qubits + batch)
    axes = [n_qubits - t for t in reversed(targets)]
    m = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(amps.shape)


def _apply_mcx(amps: np.ndarray, gate: MCXGate) -> np.ndarray:
    size = amps.shape[0]
    idx = np.arange(size)
    pos_mask = sum(1 << (q - 1) for q in gate.positive)
    neg_mask = sum(1 << (q - 1) for q in gate.negative)
    t_bit = 1 << (gate.target - 1)
    fire = ((idx & pos_mask) == pos_mask) & ((idx & neg_mask) == 0)
    return amps[np.where(fire, idx ^ t_bit, idx)]


def apply_to_array(amps: np.ndarray, gate, n_qubits: int) -> np.ndarray:
    """Apply ``gate`` to raw amplitudes; a trailing batch axis is allowed."""
    _check_positions(gate.targets, n_qubits)
    if isinstance(gate, MCXGate):
        return _apply_mcx(amps, gate)
    return _apply_dense(amps, n_qubits, gate.matrix, gate.targets)


def apply_gate(state: StateVector, gate) -> StateVector:
    out = apply_to_array(state.amplitudes, gate, state.n_qubits)
    return StateVector(out)


def _same_size(a: StateVector, b: StateVector) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValidationError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def inner_product(a: StateVector, b: StateVector) -> complex:
    _same_size(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_pure(a: StateVector, b: StateVector) -> float:
    return min(1.0, abs(inner_product(a, b)) ** 2)


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValidationError(f"expected a 2x2 matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > UNITARY_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > STATE_TOL:
            raise ValidationError(f"trace {np.trace(m).real!r} differs from 1")
        if np.min(np.linalg.eigvalsh(m)) < -STATE_TOL:
            raise ValidationError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)


def _reduce_array(amps: np.ndarray, n_qubits: int, qubit: int) -> np.ndarray:
    # amps: (2**n,) or (2**n, batch) -> (2, 2) or (batch, 2, 2)
    batch = amps.shape[1:]
    psi = amps.reshape((1 << (n_qubits - qubit), 2, 1 << (qubit - 1)) + batch)
    if batch:
        return np.einsum("iajs,ibjs->sab", psi, psi.conj())
    return np.einsum("iaj,ibj->ab", psi, psi.conj())


def reduced_single_qubit(state: StateVector, qubit: int) -> DensityMatrix2:
    _check_positions([qubit], state.n_qubits)
    rho = _reduce_array(state.amplitudes, state.n_qubits, qubit)
    return DensityMatrix2(0.5 * (rho + rho.conj().T))


def qubit_fidelity(rho: DensityMatrix2, psi: StateVector) -> float:
    if psi.n_qubits != 1:
        raise ValidationError("qubit_fidelity expects a one-qubit pure state")
    v = psi.amplitudes
    return float(np.vdot(v, rho.matrix @ v).real)


def append_zero_qubits(state: StateVector, m: int) -> StateVector:
    """Return ``state`` tensored with |0> on new qubits n+1..n+m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    amps = np.zeros(len(state) << m, dtype=complex)
    amps[: len(state)] = state.amplitudes
    return StateVector(amps)


def extract_low_register(state: StateVector, n_keep: int) -> tuple[StateVector, float]:
    """Condition qubits above ``n_keep`` on |0> and renormalize.

    Returns the kept state and the leak, the probability weight that had
    some discarded qubit excited.
    """
    if not 1 <= n_keep <= state.n_qubits:
        raise PositionError(f"n_keep={n_keep} outside 1..{state.n_qubits}")
    kept = state.amplitudes[: 1 << n_keep]
    weight = float(np.vdot(kept, kept).real)
    leak = max(0.0, 1.0 - weight)
    if weight <= STATE_TOL:
        raise DegenerateStateError("no weight on the kept branch")
    return StateVector(kept / np.sqrt(weight)), leak
