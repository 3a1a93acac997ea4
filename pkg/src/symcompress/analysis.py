"""Direction-transmission fidelities and the noise sweeps.

Sending n copies of a qubit pointing along a direction gives the optimal
estimation fidelity (n + 1)/(n + 2). With a shared reference frame, n
qubits can instead carry the compressed image of 2**n - 1 copies, which
fills the register exactly.
"""
from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

from .noise import FidelityRecord, average_fidelity

# fidelities of the Bagan et al. encoding, quoted for comparison only
EB_CITED = (0.666, 0.789, 0.845, 0.911, 0.931, 0.943)

# printed table values, used to flag where formula and print disagree
PRINTED_NAIVE = (0.666, 0.750, 0.800, 0.833, 0.855, 0.875)
PRINTED_PB = (0.666, 0.800, 0.889, 0.941, 0.970, 0.992)

PB_RULE = "PB = 2^n/(2^n+1): 2^n - 1 copies compressed into n qubits"
PB_N6_NOTE = ("n=6 PB: printed 0.992, but both 2^n/(2^n+1) and 1-1/(2^n+2) give 0.985; "
              "the printed cell is not reproduced")


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def naive_fidelity(n: int) -> float:
    _check_n(n)
    return 1.0 - 1.0 / (n + 2)


def copies_for_qubits(n: int) -> int:
    return 2**n - 1


def compressed_fidelity(n: int) -> float:
    _check_n(n)
    copies = copies_for_qubits(n)
    return (copies + 1) / (copies + 2)


@dataclass(frozen=True)
class DirectionFidelityRow:
    n: int
    naive: float
    eb: float
    pb: float


def table1() -> list[DirectionFidelityRow]:
    return [
        DirectionFidelityRow(n, naive_fidelity(n), EB_CITED[n - 1], compressed_fidelity(n))
        for n in range(1, 7)
    ]


def format_table1(rows: Sequence[DirectionFidelityRow] | None = None) -> str:
    rows = table1() if rows is None else rows
    def cell(x):
        return f"{x:.3f}"

    head = "n                  " + "".join(f"{r.n:>7d}" for r in rows)
    lines = [head]
    for name, attr in (("|psi>^n (naive)", "naive"), ("EB (cited)", "eb"), ("PB (compressed)", "pb")):
        lines.append(f"{name:<19}" + "".join(f"{cell(getattr(r, attr)):>7}" for r in rows))
    lines.append("")
    lines.append(PB_RULE)
    lines.append("note: " + PB_N6_NOTE)
    return "\n".join(lines) + "\n"


# -- sweeps ------------------------------------------------------------------

SCENARIOS = ("uncompressed", "compressed")


def sweep_global(N_range: Iterable[int], phi: float, samples: int = 2000, seed: int = 0,
                 axis_policy="averaged") -> list[FidelityRecord]:
    records = []
    for N in N_range:
        if not 2 <= N <= 16:
            raise ValueError(f"N={N} outside 2..16")
        for scenario in SCENARIOS:
            records.append(average_fidelity(N, phi, scenario, "global", axis_policy, samples, seed))
    return records


def sweep_single(phi_grid: Iterable[float], N: int = 7, axes=("x", "y", "z", "averaged"),
                 samples: int = 2000, seed: int = 0) -> list[FidelityRecord]:
    records = []
    for phi in phi_grid:
        for axis in axes:
            for scenario in SCENARIOS:
                records.append(average_fidelity(N, phi, scenario, "single_qubit", axis, samples, seed))
    return records


CSV_FIELDS = [f.name for f in fields(FidelityRecord)] + ["mean_fidelity_display"]


def _full(x) -> str:
    return format(x, ".17g") if isinstance(x, float) else str(x)


def write_csv(records: Iterable[FidelityRecord], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow([_full(v) for v in astuple(rec)] + [f"{rec.mean_fidelity:.6f}"])


def records_to_csv(records: Iterable[FidelityRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def format_records(records: Sequence[FidelityRecord]) -> str:
    head = f"{'scenario':<13}{'metric':<13}{'N':>3}{'phi':>8}  {'axis':<9}{'fidelity':>11}{'stderr':>11}"
    lines = [head, "-" * len(head)]
    for r in records:
        lines.append(f"{r.scenario:<13}{r.metric:<13}{r.N:>3}{r.phi:>8.4g}  {r.axis_policy:<9}"
                     f"{r.mean_fidelity:>11.6f}{r.stderr:>11.2e}")
    return "\n".join(lines) + "\n"
