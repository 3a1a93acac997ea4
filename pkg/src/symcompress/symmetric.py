"""Product states, Dicke states and the two single-register bases.

``c_state(N, k)`` puts one excitation on qubit ``k`` (all zeros for k = 0);
``b_state(N, k)`` is the basis state whose index is ``k`` itself, so it lives
on the lowest ``ceil(log2(N + 1))`` qubits.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .statevec import StateVector, ValidationError

PARAM_TOL = 1e-12


@dataclass(frozen=True)
class QubitParams:
    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > PARAM_TOL:
            raise ValidationError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> "QubitParams":
        return cls(complex(np.cos(theta / 2)), complex(np.exp(1j * phi) * np.sin(theta / 2)))

    def as_state(self) -> StateVector:
        return StateVector(np.array([self.alpha, self.beta], dtype=complex))


def compressed_size(N: int) -> int:
    """Qubits needed to hold the N + 1 dimensional symmetric subspace."""
    return max(1, N.bit_length())


def popcounts(n_qubits: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n_qubits, dtype=np.uint64)).astype(np.int64)


def _check_count(N: int) -> None:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")


def _check_index(N: int, k: int) -> None:
    _check_count(N)
    if not 0 <= k <= N:
        raise ValueError(f"k={k} outside 0..{N}")


def symmetric_amplitudes(psi: QubitParams, N: int) -> np.ndarray:
    """Coefficients of psi^{(x)N} in the Dicke basis: sqrt(C(N,k)) a^(N-k) b^k."""
    k = np.arange(N + 1)
    binom = np.array([sqrt(comb(N, int(j))) for j in k])
    return binom * complex(psi.alpha) ** (N - k) * complex(psi.beta) ** k


def product_state(psi: QubitParams, N: int) -> StateVector:
    _check_count(N)
    w = popcounts(N)
    return StateVector(complex(psi.alpha) ** (N - w) * complex(psi.beta) ** w)


def dicke_state(N: int, k: int) -> StateVector:
    _check_index(N, k)
    amps = np.where(popcounts(N) == k, 1.0 / sqrt(comb(N, k)), 0.0).astype(complex)
    return StateVector(amps)


def c_state(N: int, k: int) -> StateVector:
    _check_index(N, k)
    return StateVector.basis(N, 0 if k == 0 else 1 << (k - 1))


def b_state(N: int, k: int) -> StateVector:
    _check_index(N, k)
    return StateVector.basis(N, k)


def dicke_matrix(N: int) -> np.ndarray:
    """All Dicke states of N qubits as the columns of a (2**N, N+1) array."""
    w = popcounts(N)
    out = np.zeros((1 << N, N + 1), dtype=complex)
    for k in range(N + 1):
        out[w == k, k] = 1.0 / sqrt(comb(N, k))
    return out
