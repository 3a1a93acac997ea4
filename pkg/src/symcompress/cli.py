"""Command-line driver: ``python -m symcompress <command>``.

Exit codes: 0 success, 1 a verification check failed, 2 bad usage,
3 resource guard (N too large), 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from dataclasses import asdict, dataclass, field
from math import comb, sqrt
from pathlib import Path

import numpy as np

from . import analysis
from .circuit import export_circuit, gate_count_report, inverse, synthesize, synthesize_stage1
from .statevec import UNITARY_TOL
from .symmetric import compressed_size, dicke_matrix, popcounts

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_IO = 4

MAX_N = 16
MAX_TRACE_N = 10
OUTPUT_DIR_ENV = "SYMCOMPRESS_OUTPUT_DIR"


class ResourceGuard(Exception):
    pass


def _guard(N: int, allow_large: bool = False, limit: int = MAX_N) -> None:
    if N > limit and not allow_large:
        raise ResourceGuard(f"N={N} exceeds the limit of {limit} (pass --allow-large to override)")


# -- trace rendering -----------------------------------------------------------

def _coefficient(weight_units: float, sign: float) -> str:
    m = round(weight_units)
    if abs(weight_units - m) < 1e-9 and m > 0:
        text = "" if m == 1 else f"√{m}"
    else:
        text = f"{sqrt(weight_units):.6g}"
    return ("-" if sign < 0 else "") + text


def _suffix_ket(sub: np.ndarray, M: int) -> list[tuple[str, np.ndarray]]:
    """Split a suffix vector into displayable (ket, amplitudes) pieces."""
    nz = np.flatnonzero(np.abs(sub) > 1e-12)
    if M == 0:
        return [("", sub[nz])]
    weights = popcounts(M)[nz]
    j = int(weights[0])
    vals = sub[nz]
    if np.all(weights == j) and nz.size == comb(M, j) and np.allclose(vals, vals[0], atol=1e-12):
        if j in (0, M) or M == 1:
            ket = "|" + str(int(j == M and M > 0)) * M + "⟩"
        else:
            ket = f"|{M};{j}⟩"
        return [(ket, vals)]
    return [("|" + "".join(str(i >> q & 1) for q in range(M)) + "⟩", sub[[i]]) for i in nz]


def render_two_ket(amps: np.ndarray, N: int, k: int, prefix: int) -> str:
    """Show a state as processed-prefix ket times unprocessed-suffix ket.

    Coefficients are in units of 1/sqrt(C(N, k)) and printed as √m when the
    squared coefficient is an integer.
    """
    scale = comb(N, k)
    M = N - prefix
    table = amps.reshape(1 << M, 1 << prefix)
    terms = []
    for p in range(1 << prefix):
        sub = table[:, p]
        if np.sum(np.abs(sub) ** 2) < 1e-20:
            continue
        pket = "|" + "".join(str(p >> q & 1) for q in range(prefix)) + "⟩" if prefix else ""
        first = (p & -p).bit_length()
        for sket, vals in _suffix_ket(sub, M):
            weight = float(np.sum(np.abs(vals) ** 2)) * scale
            sign = np.sign(vals[0].real) if abs(vals[0].real) > abs(vals[0].imag) else 1.0
            terms.append(((first, p), _coefficient(weight, sign) + pket + sket))
    terms.sort(key=lambda t: t[0])
    out = ""
    for i, (_, text) in enumerate(terms):
        if i == 0:
            out = text
        elif text.startswith("-"):
            out += " - " + text[1:]
        else:
            out += " + " + text
    return out or "0"


@dataclass
class TraceStep:
    label: str
    prefix: int
    amplitudes: np.ndarray


def stage1_trace(N: int, k: int) -> list[TraceStep]:
    """States after each stage-1 gate applied to |N;k>."""
    if not 0 <= k <= N:
        raise ValueError(f"k={k} outside 0..{N}")
    circuit = synthesize_stage1(N)
    amps = dicke_matrix(N)[:, k]
    steps = [TraceStep("input", 0, amps)]
    for g, state in circuit.iter_states_array(amps):
        if g.label == "V":
            label, prefix = "V", 2
        elif g.label == "U":
            label, prefix = f"U({g.params['a']},{g.params['b']})", g.params["a"]
        else:
            label, prefix = f"W({g.params['a']})", g.params["a"]
        steps.append(TraceStep(label, prefix, state))
    return steps


def format_trace(N: int, k: int) -> str:
    lines = [f"trace of |{N};{k}⟩, amplitudes in units of 1/√{comb(N, k)}"]
    for step in stage1_trace(N, k):
        lines.append(f"{step.label:<8} {render_two_ket(step.amplitudes, N, k, step.prefix)}")
    return "\n".join(lines) + "\n"


# -- verification ---------------------------------------------------------------

@dataclass
class VerifyReport:
    n_max: int
    basis_mappings: int = 0
    round_trips: int = 0
    gates_checked: int = 0
    max_basis_error: float = 0.0
    max_roundtrip_error: float = 0.0
    max_leak: float = 0.0
    max_unitarity_error: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def run_verification(n_max: int, samples: int = 10, seed: int = 0) -> VerifyReport:
    """Run every circuit check for N = 1..n_max and collect failures with their (N, k)."""
    rng = np.random.default_rng(seed)
    report = VerifyReport(n_max)
    for N in range(1, n_max + 1):
        circuit = synthesize(N)
        n = compressed_size(N)
        for g in circuit.gates:
            err = g.unitarity_error()
            report.gates_checked += 1
            report.max_unitarity_error = max(report.max_unitarity_error, err)
            if err > UNITARY_TOL:
                report.failures.append({"check": "unitarity", "N": N, "gate": g.label})
        images = circuit.apply_array(dicke_matrix(N))
        for k in range(N + 1):
            target = np.zeros(1 << N)
            target[k] = 1.0
            err = float(np.max(np.abs(images[:, k] - target)))
            leak = float(np.sum(np.abs(images[1 << n:, k]) ** 2))
            report.basis_mappings += 1
            report.max_basis_error = max(report.max_basis_error, err)
            report.max_leak = max(report.max_leak, leak)
            if err > 1e-10:
                report.failures.append({"check": "basis_map", "N": N, "k": k, "error": err})
            if leak > 1e-10:
                report.failures.append({"check": "leak", "N": N, "k": k, "leak": leak})
        states = rng.standard_normal((1 << N, samples)) + 1j * rng.standard_normal((1 << N, samples))
        states /= np.linalg.norm(states, axis=0)
        back = inverse(circuit).apply_array(circuit.apply_array(states))
        err = float(np.max(np.abs(back - states)))
        report.round_trips += samples
        report.max_roundtrip_error = max(report.max_roundtrip_error, err)
        if err > 1e-12:
            report.failures.append({"check": "round_trip", "N": N, "error": err})
    return report


def format_verification(report: VerifyReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    lines = [
        f"{status}: N = 1..{report.n_max}",
        f"  basis mappings checked : {report.basis_mappings} (max error {report.max_basis_error:.2e})",
        f"  round trips checked    : {report.round_trips} (max error {report.max_roundtrip_error:.2e})",
        f"  max leak               : {report.max_leak:.2e}",
        f"  gates checked          : {report.gates_checked} (max unitarity error {report.max_unitarity_error:.2e})",
    ]
    for f in report.failures:
        where = ", ".join(f"{k}={v}" for k, v in f.items() if k != "check")
        lines.append(f"  failed {f['check']}: {where}")
    return "\n".join(lines) + "\n"


# -- argument handling -------------------------------------------------------------

def parse_n_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


def _output_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    return Path(base) / p if base and not p.is_absolute() else p


def _emit(text: str, path: str | None) -> None:
    target = _output_path(path)
    if target is None:
        sys.stdout.write(text)
    else:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
        print(f"wrote {target}", file=sys.stderr)


def cmd_verify(args) -> int:
    _guard(args.n_max, args.allow_large)
    report = run_verification(args.n_max)
    if args.json:
        payload = asdict(report)
        payload["passed"] = report.passed
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(format_verification(report), args.output)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_trace(args) -> int:
    _guard(args.N, args.allow_large, MAX_TRACE_N)
    if not 0 <= args.k <= args.N:
        print(f"error: k={args.k} outside 0..{args.N}", file=sys.stderr)
        return EXIT_USAGE
    _emit(format_trace(args.N, args.k), args.output)
    return EXIT_OK


def format_gatecount(N: int) -> str:
    r = gate_count_report(N)
    return "\n".join([
        f"N = {r.N} (compressed register: {compressed_size(N)} qubits)",
        f"  two-qubit ops (V)           : {r.two_qubit_ops}",
        f"  three-qubit ops (U, W)      : {r.three_qubit_ops}",
        f"  stage-1 CNOT bound          : {r.cnot_bound_stage1}",
        f"  bound / N^2                 : {r.quadratic_ratio:.4f}",
        f"  stage-2 CNOTs               : {r.stage2_cnots}",
        f"  stage-2 CNOT bound          : {r.stage2_cnot_bound}",
        f"  stage-2 bound N*log2(N)^2   : {r.nlog2_stage2_bound:.1f}",
        f"  mixed-polarity Toffolis     : {r.mcx_count} (up to {r.mcx_max_controls} controls)",
    ]) + "\n"


def cmd_gatecount(args) -> int:
    if args.json:
        r = gate_count_report(args.N)
        payload = asdict(r) | {"quadratic_ratio": r.quadratic_ratio}
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(format_gatecount(args.N), args.output)
    return EXIT_OK


def cmd_noise(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    print(f"seed: {seed}", file=sys.stderr)
    if args.kind == "global":
        Ns = parse_n_range(args.n or "3..15")
        for N in Ns:
            _guard(N, args.allow_large)
        records = analysis.sweep_global(Ns, args.phi[0], args.samples, seed)
    else:
        N = int(args.n or 7)
        _guard(N, args.allow_large)
        axes = tuple(args.axes.split(","))
        records = analysis.sweep_single(args.phi, N, axes, args.samples, seed)
    if args.format == "csv":
        text = analysis.records_to_csv(records)
    elif args.format == "json":
        text = json.dumps([asdict(r) for r in records], indent=2) + "\n"
    else:
        text = analysis.format_records(records)
    _emit(text, args.output)
    return EXIT_OK


def cmd_table1(args) -> int:
    _emit(analysis.format_table1(), args.output)
    return EXIT_OK


def cmd_export(args) -> int:
    _guard(args.N, args.allow_large)
    _emit(export_circuit(synthesize(args.N)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symcompress", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help=f"write here instead of stdout (relative to ${OUTPUT_DIR_ENV} if set)")
        p.add_argument("--allow-large", action="store_true", help="lift the N resource guard")
        return p

    p = common(sub.add_parser("verify", help="check the circuit for N = 1..n-max"))
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("trace", help="stage-1 states applied to |N;k>"))
    p.add_argument("N", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_trace)

    p = common(sub.add_parser("gatecount", help="gate counts and CNOT bounds"))
    p.add_argument("N", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gatecount)

    p = common(sub.add_parser("noise", help="fidelity sweeps under rotation noise"))
    p.add_argument("kind", choices=["global", "single"])
    p.add_argument("--phi", type=parse_floats, default=[0.1], help="angle(s) in radians, comma separated")
    p.add_argument("--n", help="N values: '3..15', '3,7,15' (global) or a single N (single)")
    p.add_argument("--axes", default="x,y,z,averaged", help="axis policies for 'single'")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "text", "json"], default="csv")
    p.set_defaults(func=cmd_noise)

    p = common(sub.add_parser("table1", help="direction-transmission fidelities"))
    p.set_defaults(func=cmd_table1)

    p = common(sub.add_parser("export", help="serialize the circuit for N"))
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ResourceGuard as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
