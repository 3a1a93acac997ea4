"""Synthesis of the compression circuit.

Stage 1 maps each Dicke state |N;k> to the single-excitation state
``c_state(N, k)``: a two-qubit gate V on qubits (1, 2), then for every
a = 3..N the block U(a, 1), ..., U(a, a-2), W(a). Stage 2 rewrites
``c_state(N, k)`` as ``b_state(N, k)`` with CNOTs and one mixed-polarity
Toffoli per k = 3..N. After both stages all information sits on the lowest
``compressed_size(N)`` qubits.

Serialization grammar (one record per line)::

    circuit  := header NL size NL record*
    header   := "symcompress-circuit 1"
    size     := "N=" int " stage_boundary=" int
    record   := label ["^dag"] " targets=" list (" " key "=" value)*
    label    := "V" | "U" | "W" | "CX" | "MCX"
    list     := "[" [int ("," int)*] "]"

``U`` carries ``a`` and ``b``, ``W`` carries ``a``, ``CX`` carries ``control``
and ``target``, ``MCX`` carries ``pos``, ``neg`` and ``target``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from math import comb, sqrt
from typing import Iterator

import numpy as np

from .statevec import Gate, MCXGate, StateVector, apply_to_array, cnot
from .symmetric import compressed_size

_SQRT_HALF = 1 / sqrt(2)


def _permutation_like(dim: int, rows) -> np.ndarray:
    """Build sum |out><in| from ``rows`` of (input coefficients, output index).

    Basis indices not mentioned as an input map to themselves.
    """
    m = np.zeros((dim, dim))
    covered = set()
    for coeffs, out in rows:
        for idx, c in coeffs.items():
            m[out, idx] += c
            covered.add(idx)
    for idx in range(dim):
        if idx not in covered:
            m[idx, idx] = 1.0
    return m


def gate_V() -> Gate:
    # local index = q1 + 2*q2; |10> in ket notation (qubit 1 excited) is index 1
    rows = [
        ({0: 1.0}, 0),
        ({1: _SQRT_HALF, 2: _SQRT_HALF}, 1),
        ({3: 1.0}, 2),
        ({2: _SQRT_HALF, 1: -_SQRT_HALF}, 3),
    ]
    return Gate(_permutation_like(4, rows), (1, 2), "V")


def u_coefficients(a: int, b: int) -> tuple[int, int, int]:
    """Squared weights (alpha_101^2, alpha_010^2, beta_010^2) of U(a, b)."""
    return comb(a - 1, b), comb(a - 1, b + 1), comb(a, b + 1)


def gate_U(a: int, b: int) -> Gate:
    """Three-qubit step on (b, b+1, a) that pushes an excitation from b to b+1.

    Merges |10>_b|1>_a and |01>_b|0>_a in the ratio sqrt(C(a-1,b)) :
    sqrt(C(a-1,b+1)) into |01>_b|0>_a; the orthogonal mixture goes to
    |10>_b|1>_a.
    """
    if a < 3 or not 1 <= b <= a - 2:
        raise ValueError(f"U(a={a}, b={b}) requires 1 <= b <= a-2")
    s101, s010, s_out = u_coefficients(a, b)
    a101, a010, beta = sqrt(s101), sqrt(s010), sqrt(s_out)
    # local index = x_b + 2*x_{b+1} + 4*x_a
    rows = [
        ({5: a101 / beta, 2: a010 / beta}, 2),
        ({5: a010 / beta, 2: -a101 / beta}, 5),
    ]
    return Gate(_permutation_like(8, rows), (b, b + 1, a), "U", {"a": a, "b": b})


def gate_W(a: int) -> Gate:
    """Closing step of block a on qubits (1, a-1, a).

    Handles the two edge cases: no excitation yet in the processed part, and
    the excitation already sitting on a-1.
    """
    if a < 3:
        raise ValueError(f"W(a={a}) requires a >= 3")
    a001, a100, beta = 1.0, sqrt(a - 1), sqrt(a)
    # local index = x_1 + 2*x_{a-1} + 4*x_a
    rows = [
        ({6: 1.0}, 4),
        ({4: a001 / beta, 1: a100 / beta}, 1),
        ({4: a100 / beta, 1: -a001 / beta}, 6),
    ]
    return Gate(_permutation_like(8, rows), (1, a - 1, a), "W", {"a": a})


def mixed_mcx(positive_controls, negative_controls, target: int) -> MCXGate:
    return MCXGate(tuple(positive_controls), tuple(negative_controls), target)


@dataclass(frozen=True, eq=False)
class CompressionCircuit:
    N: int
    gates: tuple
    stage_boundary: int

    @property
    def n(self) -> int:
        return compressed_size(self.N)

    def __len__(self):
        return len(self.gates)

    def apply_array(self, amps: np.ndarray) -> np.ndarray:
        for g in self.gates:
            amps = apply_to_array(amps, g, self.N)
        return amps

    def apply(self, state: StateVector) -> StateVector:
        if state.n_qubits != self.N:
            raise ValueError(f"circuit acts on {self.N} qubits, state has {state.n_qubits}")
        return StateVector(self.apply_array(state.amplitudes))

    def iter_states(self, state: StateVector) -> Iterator[tuple[object, StateVector]]:
        """Yield (gate, state after gate) for every gate in order."""
        for g, amps in self.iter_states_array(state.amplitudes):
            yield g, StateVector(amps)

    def iter_states_array(self, amps: np.ndarray) -> Iterator[tuple[object, np.ndarray]]:
        for g in self.gates:
            amps = apply_to_array(amps, g, self.N)
            yield g, amps


def synthesize_stage1(N: int) -> CompressionCircuit:
    if N < 1:
        raise ValueError("N must be >= 1")
    gates = []
    if N >= 2:
        gates.append(gate_V())
    for a in range(3, N + 1):
        gates.extend(gate_U(a, b) for b in range(1, a - 1))
        gates.append(gate_W(a))
    return CompressionCircuit(N, tuple(gates), len(gates))


def bit_positions(k: int) -> list[int]:
    return [j + 1 for j in range(k.bit_length()) if k >> j & 1]


def stage2_block(k: int) -> list:
    bits = bit_positions(k)
    negatives = [p for p in range(1, k) if p not in bits]
    block = [cnot(k, j) for j in bits]
    block.append(mixed_mcx(bits, negatives, k))
    return block


def synthesize_stage2(N: int) -> CompressionCircuit:
    if N < 1:
        raise ValueError("N must be >= 1")
    gates = []
    for k in range(3, N + 1):
        gates.extend(stage2_block(k))
    return CompressionCircuit(N, tuple(gates), 0)


def synthesize(N: int) -> CompressionCircuit:
    s1 = synthesize_stage1(N)
    s2 = synthesize_stage2(N)
    return CompressionCircuit(N, s1.gates + s2.gates, len(s1.gates))


def inverse(circuit: CompressionCircuit) -> CompressionCircuit:
    gates = tuple(g.adjoint() for g in reversed(circuit.gates))
    return CompressionCircuit(circuit.N, gates, len(gates) - circuit.stage_boundary)


@dataclass(frozen=True)
class GateCountReport:
    N: int
    three_qubit_ops: int
    two_qubit_ops: int
    cnot_bound_stage1: int
    stage2_cnots: int
    stage2_cnot_bound: int
    nlog2_stage2_bound: float
    mcx_count: int
    mcx_max_controls: int

    @property
    def quadratic_ratio(self) -> float:
        return self.cnot_bound_stage1 / self.N**2


def gate_count_report(N: int) -> GateCountReport:
    """Analytic gate counts; no CNOT-level decomposition is performed.

    Stage 1 uses at most 21 CNOTs per three-qubit gate and 3 for V. The
    stage-2 bound charges each k-block its CNOTs plus ceil(log2(k+1))**2 for
    the Toffoli, next to the looser N*log2(N)**2 estimate.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    three = (N + 1) * (N - 2) // 2 if N >= 3 else 0
    two = 1 if N >= 2 else 0
    bound1 = 21 * (N * N - N - 2) // 2 + 3 if N >= 2 else 0
    ks = range(3, N + 1)
    cnots = sum(len(bit_positions(k)) for k in ks)
    bound2 = sum(len(bit_positions(k)) + compressed_size(k) ** 2 for k in ks)
    return GateCountReport(
        N=N,
        three_qubit_ops=three,
        two_qubit_ops=two,
        cnot_bound_stage1=bound1,
        stage2_cnots=cnots,
        stage2_cnot_bound=bound2,
        nlog2_stage2_bound=N * math.log2(N) ** 2 if N >= 3 else 0.0,
        mcx_count=max(0, N - 2),
        mcx_max_controls=N - 1 if N >= 3 else 0,
    )


# -- serialization -----------------------------------------------------------

HEADER = "symcompress-circuit 1"


def _fmt_list(xs) -> str:
    return "[" + ",".join(str(x) for x in xs) + "]"


def _record(g) -> str:
    if isinstance(g, MCXGate):
        if g.label == "CX":
            return f"CX targets={_fmt_list(g.targets)} control={g.positive[0]} target={g.target}"
        return (f"MCX targets={_fmt_list(g.targets)} pos={_fmt_list(g.positive)} "
                f"neg={_fmt_list(g.negative)} target={g.target}")
    label = g.label + ("^dag" if g.params.get("adjoint") else "")
    extras = "".join(f" {key}={g.params[key]}" for key in ("a", "b") if key in g.params)
    return f"{label} targets={_fmt_list(g.targets)}{extras}"


def export_circuit(circuit: CompressionCircuit) -> str:
    lines = [HEADER, f"N={circuit.N} stage_boundary={circuit.stage_boundary}"]
    lines.extend(_record(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_FIELD = re.compile(r"(\w+)=(\[[^\]]*\]|-?\d+)")


def _parse_value(text: str):
    if text.startswith("["):
        body = text[1:-1].strip()
        return [int(x) for x in body.split(",")] if body else []
    return int(text)


def _rebuild(label: str, fields: dict):
    adjoint = label.endswith("^dag")
    base = label[:-4] if adjoint else label
    if base == "V":
        g = gate_V()
    elif base == "U":
        g = gate_U(fields["a"], fields["b"])
    elif base == "W":
        g = gate_W(fields["a"])
    elif base == "CX":
        return cnot(fields["control"], fields["target"])
    elif base == "MCX":
        return mixed_mcx(fields["pos"], fields["neg"], fields["target"])
    else:
        raise ValueError(f"unknown gate label {label!r}")
    if tuple(fields["targets"]) != g.targets:
        raise ValueError(f"{label}: targets {fields['targets']} inconsistent with parameters")
    return g.adjoint() if adjoint else g


def parse_circuit(text: str) -> CompressionCircuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != HEADER:
        raise ValueError("missing circuit header")
    size = dict((k, _parse_value(v)) for k, v in _FIELD.findall(lines[1]))
    gates = []
    for line in lines[2:]:
        label, _, rest = line.partition(" ")
        fields = {k: _parse_value(v) for k, v in _FIELD.findall(rest)}
        gates.append(_rebuild(label, fields))
    return CompressionCircuit(size["N"], tuple(gates), size["stage_boundary"])
