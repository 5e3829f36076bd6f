"""Bit-expansion discretization of monotone grid functions, the biased
cube -> continuous lift, and the dual transform.

Discretization replaces coordinate i by l bits: the grid cell index m_i
along axis i is written in binary, bit j carrying place value 2^j (j=0
least significant).  Under the divisibility precondition r_i | 2^l the
construction is exact: expectation and influences transfer without
approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cube import MAX_ARITY, CubeFunction, ProductMeasure, cube_h_influence
from .grid import GridFunction
from .kernels import catalogue_kernel
from .monotone import is_monotone

_INDICATOR = catalogue_kernel("indicator")


@dataclass(frozen=True)
class BitGrouping:
    """Partition of the l*n cube coordinates into n blocks of l bits.

    ``groups[i]`` lists the 1-based cube coordinates of original
    coordinate i, ordered by place value: entry j carries 2^j in the
    binary expansion of the cell index (j=0 least significant).
    """

    n: int
    l: int
    groups: dict

    def to_text(self) -> str:
        return "".join(
            f"groups={i}:" + ",".join(str(c) for c in self.groups[i]) + "\n"
            for i in sorted(self.groups)
        )

    @classmethod
    def from_text(cls, text: str) -> "BitGrouping":
        groups = {}
        for line in text.strip().splitlines():
            line = line.strip()
            if not line.startswith("groups="):
                continue
            head, body = line[7:].split(":")
            groups[int(head)] = tuple(int(c) for c in body.split(","))
        n = len(groups)
        l = len(next(iter(groups.values())))
        return cls(n, l, groups)


def default_bits(n: int) -> int:
    """Default bits per coordinate, ceil(3*log2 n) with a floor of 1."""
    return max(1, math.ceil(3 * math.log2(n))) if n >= 2 else 1


def discretize(f: GridFunction, l: int) -> tuple[CubeFunction, BitGrouping]:
    """Exact bit-expansion of a monotone grid function.

    Requires every r_i to divide 2^l (the step function is then constant
    on the 2^{ln} sub-cubes) and l*n within the dense cube cap.  The cube
    function g satisfies g(m_1,...,m_n) = f on the corresponding sub-cube
    and preserves the expectation exactly under the uniform measure.
    """
    if l < 1:
        raise ValueError("l must be a positive integer")
    n = f.arity
    if l * n > MAX_ARITY:
        raise ValueError(f"l*n = {l * n} exceeds the cube arity cap {MAX_ARITY}")
    if not is_monotone(f):
        raise ValueError("discretize requires a monotone grid function")
    side = 1 << l
    for r in f.resolutions:
        if side % r != 0:
            raise ValueError(f"resolution {r} does not divide 2^l = {side}")
    cells = f.cells
    for axis, r in enumerate(f.resolutions):
        factor = side // r
        if factor > 1:
            cells = np.repeat(cells, factor, axis=axis)
    table = cells.ravel()  # C order: coordinate 1 = most significant bits
    g = CubeFunction(l * n, table)
    groups = {
        i: tuple(i * l - j for j in range(l))  # j=0 (LSB) first
        for i in range(1, n + 1)
    }
    return g, BitGrouping(n, l, groups)


def grouped_bit_influence_sums(g: CubeFunction, grouping: BitGrouping, mu: ProductMeasure) -> list:
    """Per original coordinate, the sum of indicator influences of its bits."""
    if grouping.n * grouping.l != g.arity:
        raise ValueError("grouping is inconsistent with the cube arity")
    sums = []
    for i in range(1, grouping.n + 1):
        coords = grouping.groups[i]
        sums.append(sum(cube_h_influence(g, mu, c, _INDICATOR) for c in coords))
    return sums


def lift_biased(f: CubeFunction, q) -> GridFunction:
    """Lift a cube function under mu_q to a step function on [0,1]^n.

    With q = a/d, each axis gets resolution d and cell j maps to bit 1 iff
    j >= d-a (the threshold x > 1-q).  Expectation and, for the entropy
    kernel, per-coordinate influences transfer exactly.
    """
    q = Fraction(q)
    if not (0 < q < 1):
        raise ValueError(f"bias {q} not strictly inside (0,1)")
    a, d = q.numerator, q.denominator
    bit_of_cell = (np.arange(d) >= d - a).astype(np.intp)
    t = f.tensor()
    cells = t[np.ix_(*([bit_of_cell] * f.arity))]
    return GridFunction((d,) * f.arity, cells)


def dual(f: CubeFunction) -> CubeFunction:
    """Pointwise dual 1 - f(1-x_1, ..., 1-x_n); an involution."""
    t = f.tensor()
    flipped = t[tuple(slice(None, None, -1) for _ in range(f.arity))]
    return CubeFunction(f.arity, (1 - flipped).ravel())
