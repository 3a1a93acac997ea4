"""Rotation noise on stored qubits, with and without compression.

Every stored qubit is rotated by the same single-qubit unitary
``exp(-i angle/2 n.sigma)``. In the uncompressed scenario all N copies are
stored; in the compressed one only the ``compressed_size(N)`` register is
stored, then padded with |0> qubits and decompressed by the inverse circuit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence, Union

import numpy as np

from .circuit import inverse, synthesize
from .statevec import (
    STATE_TOL,
    StateVector,
    ValidationError,
    _reduce_array,
    append_zero_qubits,
    apply_to_array,
    extract_low_register,
    fidelity_pure,
    qubit_fidelity,
    reduced_single_qubit,
)
from .symmetric import QubitParams, compressed_size, dicke_matrix, popcounts, product_state

AXIS_TOL = 1e-12

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

NAMED_AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}

AxisPolicy = Union[str, Sequence[float]]


class LeakageError(RuntimeError):
    """Compression left weight outside the kept register."""


@dataclass(frozen=True)
class RotationNoise:
    axis: tuple
    angle: float

    def __post_init__(self):
        axis = tuple(float(x) for x in self.axis)
        if len(axis) != 3 or abs(np.linalg.norm(axis) - 1.0) > AXIS_TOL:
            raise ValidationError(f"axis {axis} is not a unit 3-vector")
        object.__setattr__(self, "axis", axis)


def rotation_unitary(noise: RotationNoise) -> np.ndarray:
    half = noise.angle / 2
    n_sigma = np.tensordot(np.asarray(noise.axis), PAULI, axes=1)
    return np.cos(half) * np.eye(2) - 1j * np.sin(half) * n_sigma


def _rotations(axes: np.ndarray, angle: float) -> np.ndarray:
    # axes (S, 3) -> unitaries (S, 2, 2)
    n_sigma = np.einsum("si,iab->sab", axes, PAULI)
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * n_sigma


def _rotate_register(amps: np.ndarray, n: int, rot: np.ndarray) -> np.ndarray:
    """Apply rot[s] to every qubit of register column s. amps: (2**n, S)."""
    s = amps.shape[1]
    out = amps.T
    for j in range(1, n + 1):
        out = out.reshape(s, 1 << (n - j), 2, 1 << (j - 1))
        out = np.einsum("sab,sibj->siaj", rot, out)
    return out.reshape(s, 1 << n).T


def run_uncompressed(N: int, psi: QubitParams, noise: RotationNoise) -> tuple[float, float]:
    """(global, single-qubit) fidelity when all N copies are stored and rotated."""
    v = psi.as_state().amplitudes
    overlap = abs(np.vdot(v, rotation_unitary(noise) @ v)) ** 2
    return float(overlap**N), float(overlap)


def simulate_uncompressed(N: int, psi: QubitParams, noise: RotationNoise) -> tuple[float, float]:
    """Same as :func:`run_uncompressed` but by explicit N-qubit simulation."""
    from .statevec import Gate

    original = product_state(psi, N)
    amps = original.amplitudes
    rot = rotation_unitary(noise)
    for q in range(1, N + 1):
        amps = apply_to_array(amps, Gate(rot, (q,), "R"), N)
    noisy = StateVector(amps)
    single = qubit_fidelity(reduced_single_qubit(noisy, 1), psi.as_state())
    return fidelity_pure(original, noisy), single


def run_compressed(N: int, psi: QubitParams, noise: RotationNoise, qubit: int = 1) -> tuple[float, float]:
    """Compress, store the register under noise, pad with zeros, decompress.

    Returns (global fidelity against the original product state, fidelity of
    the reduced state of ``qubit`` against psi).
    """
    if N < 2:
        raise ValueError("compressed storage needs N >= 2")
    circuit = _circuit_pair(N)[0]
    original = product_state(psi, N)
    compressed = circuit.apply(original)
    n = compressed_size(N)
    stored, leak = extract_low_register(compressed, n)
    if leak > STATE_TOL:
        raise LeakageError(f"leak {leak:.3g} outside the first {n} qubits")
    noisy = _rotate_register(stored.amplitudes[:, None], n, rotation_unitary(noise)[None])
    padded = append_zero_qubits(StateVector(noisy[:, 0]), N - n)
    restored = _circuit_pair(N)[1].apply(padded)
    single = qubit_fidelity(reduced_single_qubit(restored, qubit), psi.as_state())
    return fidelity_pure(original, restored), single


@lru_cache(maxsize=None)
def _circuit_pair(N: int):
    c = synthesize(N)
    return c, inverse(c)


class CompressedStorage:
    """Batched form of :func:`run_compressed` for one N.

    By linearity the circuit is tabulated once: the encoder holds the
    compressed images of the N + 1 Dicke states, the decoder the
    decompressed images of the 2**n register basis states.
    """

    def __init__(self, N: int):
        if N < 2:
            raise ValueError("compressed storage needs N >= 2")
        self.N = N
        self.n = n = compressed_size(N)
        forward, backward = _circuit_pair(N)
        images = forward.apply_array(dicke_matrix(N))
        leak = np.sum(np.abs(images[1 << n:]) ** 2, axis=0)
        if np.max(leak) > STATE_TOL:
            raise LeakageError(f"leak {np.max(leak):.3g} outside the first {n} qubits")
        self.encoder = images[: 1 << n]
        basis = np.zeros((1 << N, 1 << n), dtype=complex)
        basis[: 1 << n] = np.eye(1 << n)
        self.decoder = backward.apply_array(basis)

    def fidelities(self, psis: np.ndarray, rotations: np.ndarray, qubit: int = 1):
        """Global and single-qubit fidelities for batches of inputs.

        psis: (S, 2) normalized amplitudes; rotations: (S, 2, 2).
        """
        N = self.N
        alpha, beta = psis[:, 0], psis[:, 1]
        k = np.arange(N + 1)[:, None]
        binom = np.sqrt([float(comb(N, j)) for j in range(N + 1)])[:, None]
        sym = binom * alpha[None] ** (N - k) * beta[None] ** k
        stored = _rotate_register(self.encoder @ sym, self.n, rotations)
        restored = self.decoder @ stored
        w = popcounts(N)[:, None]
        original = alpha[None] ** (N - w) * beta[None] ** w
        glob = np.abs(np.einsum("is,is->s", original.conj(), restored)) ** 2
        rho = _reduce_array(restored, N, qubit)
        single = np.einsum("sa,sab,sb->s", psis.conj(), rho, psis).real
        return glob, single


@lru_cache(maxsize=32)
def _storage(N: int) -> CompressedStorage:
    return CompressedStorage(N)


@dataclass(frozen=True)
class FidelityRecord:
    scenario: str
    metric: str
    N: int
    phi: float
    axis_policy: str
    mean_fidelity: float
    stderr: float
    samples: int
    rng_seed: int


def axis_label(axis_policy: AxisPolicy) -> str:
    if isinstance(axis_policy, str):
        return axis_policy
    return "fixed(" + ",".join(repr(float(x)) for x in axis_policy) + ")"


def sample_inputs(samples: int, rng_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Haar-random qubit states and uniform axes, in that draw order.

    Inputs are drawn first, so every scenario and axis policy sharing a
    seed sees the same states.
    """
    rng = np.random.default_rng(rng_seed)
    g = rng.standard_normal((samples, 4))
    psis = g[:, 0::2] + 1j * g[:, 1::2]
    psis /= np.linalg.norm(psis, axis=1, keepdims=True)
    axes = rng.standard_normal((samples, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    return psis, axes


def _resolve_axes(axis_policy: AxisPolicy, random_axes: np.ndarray) -> np.ndarray:
    if isinstance(axis_policy, str):
        if axis_policy == "averaged":
            return random_axes
        if axis_policy not in NAMED_AXES:
            raise ValueError(f"unknown axis policy {axis_policy!r}")
        axis = NAMED_AXES[axis_policy]
    else:
        axis = RotationNoise(tuple(axis_policy), 0.0).axis
    return np.broadcast_to(np.asarray(axis, dtype=float), random_axes.shape)


def sampled_fidelities(N, phi, scenario, metric, axis_policy="averaged",
                       samples=2000, rng_seed=0, chunk=None) -> np.ndarray:
    """Per-sample fidelities underlying :func:`average_fidelity`."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if metric not in ("global", "single_qubit"):
        raise ValueError(f"unknown metric {metric!r}")
    psis, random_axes = sample_inputs(samples, rng_seed)
    rots = _rotations(_resolve_axes(axis_policy, random_axes), phi)
    if scenario == "uncompressed":
        overlap = np.abs(np.einsum("sa,sab,sb->s", psis.conj(), rots, psis)) ** 2
        return overlap**N if metric == "global" else overlap
    if scenario != "compressed":
        raise ValueError(f"unknown scenario {scenario!r}")
    storage = _storage(N)
    if chunk is None:
        chunk = max(1, (1 << 22) >> N)
    out = np.empty(samples)
    for start in range(0, samples, chunk):
        sl = slice(start, start + chunk)
        glob, single = storage.fidelities(psis[sl], rots[sl])
        out[sl] = glob if metric == "global" else single
    return out


def average_fidelity(N, phi, scenario, metric, axis_policy="averaged",
                     samples=2000, rng_seed=0) -> FidelityRecord:
    values = sampled_fidelities(N, phi, scenario, metric, axis_policy, samples, rng_seed)
    stderr = float(np.std(values, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return FidelityRecord(
        scenario=scenario,
        metric=metric,
        N=N,
        phi=float(phi),
        axis_policy=axis_label(axis_policy),
        mean_fidelity=float(np.mean(values)),
        stderr=stderr,
        samples=samples,
        rng_seed=rng_seed,
    )
