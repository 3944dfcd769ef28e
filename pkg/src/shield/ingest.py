"""Incidence table parsing, validation and filtering.

The statistical input to the whole pipeline is a subjects-with-event count
table: one row per MedDRA Preferred Term, one column per treatment arm,
plus the number of subjects at risk in each arm.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateTerm, EmptyTable, InvalidCount, SchemaError

PT_COLUMN = "pt"
N_SIDECAR_PREFIX = "#N"


@dataclass(frozen=True)
class IncidenceTable:
    """PT x arm subject counts with per-arm totals.

    pt_names    unique preferred terms (whitespace-trimmed, case preserved)
    counts      (m, k) nonnegative integers, counts[i, j] <= n_subjects[j]
    arm_names   arm labels, one per column
    n_subjects  subjects at risk per arm, all positive
    """

    pt_names: list[str]
    counts: np.ndarray
    arm_names: list[str]
    n_subjects: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        n = np.array(self.n_subjects, dtype=np.int64)
        if counts.ndim != 2:
            raise SchemaError("counts must be a 2-D matrix")
        m, k = counts.shape
        if m < 1 or k < 1:
            raise EmptyTable("incidence table must have at least one row and one arm")
        if len(self.pt_names) != m or len(self.arm_names) != k or n.shape != (k,):
            raise SchemaError("pt_names/arm_names/n_subjects sizes do not match counts")
        trimmed = [p.strip() for p in self.pt_names]
        seen = set()
        for p in trimmed:
            if p in seen:
                raise DuplicateTerm(p)
            seen.add(p)
        if np.any(n <= 0):
            raise SchemaError("all arm totals must be positive")
        if np.any(counts < 0):
            i, j = np.argwhere(counts < 0)[0]
            raise InvalidCount(
                f"negative count {counts[i, j]}", row=int(i), column=self.arm_names[j]
            )
        if np.any(counts > n[np.newaxis, :]):
            i, j = np.argwhere(counts > n[np.newaxis, :])[0]
            raise InvalidCount(
                f"count {counts[i, j]} exceeds arm total {n[j]}",
                row=int(i),
                column=self.arm_names[j],
            )
        counts.flags.writeable = False
        n.flags.writeable = False
        object.__setattr__(self, "pt_names", trimmed)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "arm_names", list(self.arm_names))
        object.__setattr__(self, "n_subjects", n)

    @property
    def m(self) -> int:
        return self.counts.shape[0]

    @property
    def k(self) -> int:
        return self.counts.shape[1]

    @property
    def totals(self) -> np.ndarray:
        """Per-PT event totals T_i = sum_j counts[i, j]."""
        return self.counts.sum(axis=1)

    @property
    def n_total(self) -> int:
        """Total subjects at risk across arms."""
        return int(self.n_subjects.sum())


def _parse_header(header: list[str]) -> tuple[list[str], list[int | None]]:
    if not header or header[0].strip() != PT_COLUMN:
        raise SchemaError(f"first column must be {PT_COLUMN!r}, got {header[:1]!r}")
    names: list[str] = []
    totals: list[int | None] = []
    for cell in header[1:]:
        cell = cell.strip()
        if "|N=" in cell:
            name, _, nstr = cell.rpartition("|N=")
            try:
                total = int(nstr)
            except ValueError:
                raise SchemaError(f"bad arm total in header cell {cell!r}") from None
            names.append(name.strip())
            totals.append(total)
        else:
            names.append(cell)
            totals.append(None)
    return names, totals


def parse_incidence_csv(source, arm_spec: list[str] | None = None) -> IncidenceTable:
    """Parse a UTF-8 incidence CSV into an :class:`IncidenceTable`.

    Header is ``pt,<arm>|N=<int>,...``; alternatively arm totals come from a
    second header line ``#N,<int>,...``.  `arm_spec` selects and orders the
    arm columns to analyze (default: all, in file order).  Rows keep file
    order.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise SchemaError("empty CSV")
    arm_names, totals = _parse_header(rows[0])
    if not arm_names:
        raise SchemaError("no arm columns in header")
    body = rows[1:]
    if body and body[0] and body[0][0].strip() == N_SIDECAR_PREFIX:
        sidecar = body[0]
        if len(sidecar) != len(arm_names) + 1:
            raise SchemaError("#N row length does not match the header")
        try:
            totals = [int(c.strip()) for c in sidecar[1:]]
        except ValueError:
            raise SchemaError("non-integer value in #N row") from None
        body = body[1:]
    if any(t is None for t in totals):
        raise SchemaError(
            "arm totals missing: use '<arm>|N=<int>' headers or a '#N' row"
        )

    if arm_spec is None:
        selection = list(range(len(arm_names)))
    else:
        missing = [a for a in arm_spec if a not in arm_names]
        if missing:
            raise SchemaError(f"arm column(s) not found: {', '.join(missing)}")
        selection = [arm_names.index(a) for a in arm_spec]

    pts: list[str] = []
    counts: list[list[int]] = []
    for r, row in enumerate(body, start=1):
        if len(row) != len(arm_names) + 1:
            raise SchemaError(f"row {r} has {len(row)} cells, expected {len(arm_names) + 1}")
        pt = row[0].strip()
        if not pt:
            raise SchemaError(f"row {r} has an empty PT name")
        values = []
        for j in selection:
            cell = row[1 + j].strip()
            try:
                c = int(cell)
            except ValueError:
                raise InvalidCount(
                    f"non-integer count {cell!r}", row=r, column=arm_names[j]
                ) from None
            if c < 0:
                raise InvalidCount(f"negative count {c}", row=r, column=arm_names[j])
            if c > totals[j]:
                raise InvalidCount(
                    f"count {c} exceeds arm total {totals[j]}", row=r, column=arm_names[j]
                )
            values.append(c)
        if pt in pts:
            raise DuplicateTerm(pt)
        pts.append(pt)
        counts.append(values)
    if not pts:
        raise SchemaError("CSV has a header but no data rows")
    return IncidenceTable(
        pt_names=pts,
        counts=np.array(counts, dtype=np.int64),
        arm_names=[arm_names[j] for j in selection],
        n_subjects=np.array([totals[j] for j in selection], dtype=np.int64),
    )


def write_incidence_csv(table: IncidenceTable) -> bytes:
    """Serialize back to the header-embedded-totals CSV form."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [PT_COLUMN]
        + [f"{a}|N={n}" for a, n in zip(table.arm_names, table.n_subjects)]
    )
    for i, pt in enumerate(table.pt_names):
        writer.writerow([pt] + [int(c) for c in table.counts[i]])
    return buf.getvalue().encode("utf-8")


def filter_zero_rows(table: IncidenceTable) -> IncidenceTable:
    """Drop rows with zero events in every selected arm (idempotent)."""
    keep = table.totals >= 1
    if not np.any(keep):
        raise EmptyTable("all rows have zero events in the selected arms")
    if np.all(keep):
        return table
    idx = np.flatnonzero(keep)
    return IncidenceTable(
        pt_names=[table.pt_names[i] for i in idx],
        counts=table.counts[idx],
        arm_names=table.arm_names,
        n_subjects=table.n_subjects,
    )


def proportions(table: IncidenceTable) -> np.ndarray:
    """Per-cell incidence proportions counts[i, j] / n_subjects[j]."""
    return table.counts / table.n_subjects[np.newaxis, :].astype(np.float64)
