"""Monotonization by shifting, monotonicity testing, and the traced
column-reorder/move algorithm for square bit matrices.

Monotonizing a coordinate replaces every fiber line with c ones by the
line whose last c cells are ones; the fiber mean is preserved exactly.
The traced algorithm decomposes the same row-wise shift into column
reorders and single-bit moves, each of which keeps the column-sum
functional sum_j h(ones_j / r) non-increasing for concave h.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction


def monotonize_coord(f: GridFunction, k: int) -> GridFunction:
    """Push the ones of every fiber line in direction k to the top cells."""
    if not (1 <= k <= f.arity):
        raise ValueError(f"coordinate {k} out of range 1..{f.arity}")
    return GridFunction(f.resolutions, np.sort(f.cells, axis=k - 1))


def monotonize(f: GridFunction) -> GridFunction:
    """Sequential monotonization over coordinates 1..n; output is monotone."""
    for k in range(1, f.arity + 1):
        f = monotonize_coord(f, k)
    return f


def is_monotone(f: GridFunction) -> bool:
    """Non-decreasing along every axis-parallel line."""
    return all(
        np.all(np.diff(f.cells, axis=a).astype(np.int8) >= 0) for a in range(f.arity)
    )


@dataclass(frozen=True)
class ColumnReorder:
    """Permutation of the currently active columns; new column j is taken
    from old column permutation[j]."""

    permutation: tuple


@dataclass(frozen=True)
class MoveOne:
    """Move the 1 at (row, from_column) onto the 0 at (row, to_column)."""

    row: int
    from_column: int
    to_column: int


@dataclass
class ShiftTrace:
    """Replayable record of the shifting algorithm on a square bit matrix.

    All indices are 0-based.  Each ColumnReorder permutes a prefix of the
    columns; each MoveOne transfers a single 1 within one row.
    """

    initial: np.ndarray
    final: np.ndarray
    steps: list = field(default_factory=list)

    def replay(self) -> np.ndarray:
        m = self.initial.copy()
        for step in self.steps:
            if isinstance(step, ColumnReorder):
                w = len(step.permutation)
                m[:, :w] = m[:, list(step.permutation)]
            else:
                if m[step.row, step.from_column] != 1 or m[step.row, step.to_column] != 0:
                    raise ValueError("invalid MoveOne during replay")
                m[step.row, step.from_column] = 0
                m[step.row, step.to_column] = 1
        return m

    def to_text(self) -> str:
        lines = []
        for step in self.steps:
            if isinstance(step, ColumnReorder):
                lines.append("reorder " + ",".join(str(p) for p in step.permutation))
            else:
                lines.append(f"move r={step.row} from={step.from_column} to={step.to_column}")
        return "\n".join(lines) + ("\n" if lines else "")

    @staticmethod
    def steps_from_text(text: str) -> list:
        steps = []
        for line in text.strip().splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("reorder "):
                steps.append(ColumnReorder(tuple(int(p) for p in line[8:].split(","))))
            elif line.startswith("move "):
                parts = dict(p.split("=") for p in line[5:].split())
                steps.append(MoveOne(int(parts["r"]), int(parts["from"]), int(parts["to"])))
            else:
                raise ValueError(f"unrecognized trace line {line!r}")
        return steps


def shift_trace(A: np.ndarray) -> ShiftTrace:
    """Run the shifting algorithm on a square bit matrix, recording steps.

    For i = 0..r-1: restrict to columns 0..r-i-1, stable-sort those
    columns by ones count ascending (so the rightmost active column has a
    maximal count), then fill each 0 in the rightmost active column by
    moving the leftmost 1 of its row, when one exists.  The final matrix
    is the row-wise right-shift of A.
    """
    A = np.asarray(A, dtype=np.uint8)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("shift_trace expects a square bit matrix")
    r = A.shape[0]
    m = A.copy()
    steps = []
    for i in range(r):
        w = r - i
        counts = m[:, :w].sum(axis=0)
        perm = tuple(int(p) for p in np.argsort(counts, kind="stable"))
        if perm != tuple(range(w)):
            steps.append(ColumnReorder(perm))
            m[:, :w] = m[:, list(perm)]
        rightmost = w - 1
        for row in range(r):
            if m[row, rightmost] == 0:
                ones = np.nonzero(m[row, :rightmost])[0]
                if len(ones):
                    src = int(ones[0])
                    m[row, src] = 0
                    m[row, rightmost] = 1
                    steps.append(MoveOne(row, src, rightmost))
    trace = ShiftTrace(initial=A, final=m, steps=steps)
    expected = np.sort(A, axis=1)
    assert np.array_equal(m, expected), "shift algorithm disagrees with row-wise shift"
    return trace
