"""Boolean step functions on [0,1]^n under the Lebesgue measure.

A GridFunction is a dense bit table over a uniform per-axis grid: cell
(j_1,...,j_n) covers the open box prod (j_i/r_i, (j_i+1)/r_i).  Fiber
means are exact rationals (ones count over r_k); the kernel evaluation in
grid_h_influence is the only floating-point step, and stays exact for
kernels that map rationals to rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cube import _bits_to_hex, _hex_to_bits

MAX_CELLS = 1 << 27


@dataclass(frozen=True)
class GridFunction:
    """Bit table over a uniform grid; axis i-1 of ``cells`` is coordinate i."""

    resolutions: tuple
    cells: np.ndarray

    def __post_init__(self):
        res = tuple(int(r) for r in self.resolutions)
        if not res or any(r < 1 for r in res):
            raise ValueError("resolutions must be positive integers")
        if math.prod(res) > MAX_CELLS:
            raise ValueError(f"cell count {math.prod(res)} exceeds the cap {MAX_CELLS}")
        cells = np.ascontiguousarray(np.asarray(self.cells, dtype=np.uint8).reshape(res))
        if np.any(cells > 1):
            raise ValueError("cells must be bits")
        cells.setflags(write=False)
        object.__setattr__(self, "resolutions", res)
        object.__setattr__(self, "cells", cells)

    @property
    def arity(self) -> int:
        return len(self.resolutions)

    @property
    def n_cells(self) -> int:
        return math.prod(self.resolutions)

    def __eq__(self, other):
        return (
            isinstance(other, GridFunction)
            and self.resolutions == other.resolutions
            and np.array_equal(self.cells, other.cells)
        )

    def to_text(self) -> str:
        r = ",".join(str(x) for x in self.resolutions)
        return f"n={self.arity}\nr={r}\n{_bits_to_hex(self.cells.ravel())}\n"

    @classmethod
    def from_text(cls, text: str) -> "GridFunction":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if len(lines) < 3 or not lines[0].startswith("n=") or not lines[1].startswith("r="):
            raise ValueError("grid file must start with 'n=<int>' and 'r=<r1,...>' lines")
        n = int(lines[0][2:])
        res = tuple(int(x) for x in lines[1][2:].split(","))
        if len(res) != n:
            raise ValueError(f"grid file declares n={n} but lists {len(res)} resolutions")
        bits = _hex_to_bits(lines[2], math.prod(res))
        return cls(res, bits)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "GridFunction":
        with open(path) as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True)
class FiberProfile:
    """Exact multiset of (weight, fiber mean) pairs for one coordinate."""

    coordinate: int
    entries: tuple  # of (Fraction weight, Fraction mean)

    def total_weight(self) -> Fraction:
        return sum((w for w, _ in self.entries), Fraction(0))


def _check_coord(f: GridFunction, k: int):
    if not (1 <= k <= f.arity):
        raise ValueError(f"coordinate {k} out of range 1..{f.arity}")


def grid_expectation(f: GridFunction) -> Fraction:
    """Exact cell-mass-weighted mean of the bit table."""
    return Fraction(int(f.cells.sum(dtype=np.int64)), f.n_cells)


def fiber_ones_counts(f: GridFunction, k: int) -> np.ndarray:
    """Ones count along each fiber line in direction k, flattened C-order."""
    _check_coord(f, k)
    return f.cells.sum(axis=k - 1, dtype=np.int64).ravel()


def fiber_profile(f: GridFunction, k: int) -> FiberProfile:
    """One (weight, mean) entry per assignment of the other coordinates."""
    counts = fiber_ones_counts(f, k)
    rk = f.resolutions[k - 1]
    w = Fraction(1, len(counts))
    entries = tuple((w, Fraction(int(c), rk)) for c in counts)
    return FiberProfile(k, entries)


def grid_h_influence(f: GridFunction, k: int, h) -> Fraction | float:
    """Sum over fibers of weight * h(fiber mean).

    Aggregates fibers by their ones count, so h is evaluated at most
    r_k + 1 times.  Exact (Fraction) whenever h is rational-valued.
    """
    counts = fiber_ones_counts(f, k)
    rk = f.resolutions[k - 1]
    n_fibers = len(counts)
    bc = np.bincount(counts, minlength=rk + 1)
    total = sum(int(bc[c]) * h(Fraction(c, rk)) for c in range(rk + 1) if bc[c])
    if isinstance(total, float):
        return total / n_fibers
    return Fraction(total) / n_fibers


def grid_influence_vector(f: GridFunction, h) -> list:
    return [grid_h_influence(f, k, h) for k in range(1, f.arity + 1)]


def grid_boundary_measure(A: GridFunction) -> Fraction:
    """Mass of one-cells lying on at least one nonconstant fiber line."""
    cells = A.cells
    nonconst = np.zeros(cells.shape, dtype=bool)
    for axis, r in enumerate(A.resolutions):
        counts = cells.sum(axis=axis, keepdims=True, dtype=np.int64)
        nonconst |= (counts % r) != 0
    boundary = (cells == 1) & nonconst
    return Fraction(int(boundary.sum(dtype=np.int64)), A.n_cells)


def refine(f: GridFunction, factors) -> GridFunction:
    """Split every cell ``factors[i]`` ways along axis i, duplicating bits."""
    cells = f.cells
    res = []
    for axis, (r, m) in enumerate(zip(f.resolutions, factors)):
        m = int(m)
        if m < 1:
            raise ValueError("refinement factors must be positive")
        if m > 1:
            cells = np.repeat(cells, m, axis=axis)
        res.append(r * m)
    return GridFunction(tuple(res), cells)


def common_grid(fs) -> list:
    """Refine a family of equal-arity grid functions to per-axis lcm grids."""
    fs = list(fs)
    arity = fs[0].arity
    if any(f.arity != arity for f in fs):
        raise ValueError("family members must share an arity")
    lcms = [math.lcm(*(f.resolutions[i] for f in fs)) for i in range(arity)]
    if math.prod(lcms) > MAX_CELLS:
        raise ValueError("common refinement exceeds the cell cap")
    return [refine(f, [l // r for l, r in zip(lcms, f.resolutions)]) for f in fs]


def intersection_mass(A: GridFunction, B: GridFunction) -> Fraction:
    """Lebesgue mass of A intersect B on a shared grid."""
    if A.resolutions != B.resolutions:
        A, B = common_grid([A, B])
    both = (A.cells & B.cells).sum(dtype=np.int64)
    return Fraction(int(both), A.n_cells)
