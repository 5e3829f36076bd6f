"""Boolean functions on the discrete cube {0,1}^m under product measures.

Truth tables are dense numpy bit arrays indexed by the integer whose
binary digits are (x_1, ..., x_m) with coordinate 1 as the most
significant bit.  All measure-weighted quantities are exact rationals:
point masses are carried as integer numerators over the common
denominator prod(d_i) of the biases q_i = a_i/d_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_ARITY = 24
_INT64_SAFE = 1 << 62


def _bits_to_hex(bits: np.ndarray) -> str:
    """Pack a bit vector into a hex string, first bit most significant.

    The string has ceil(n/4) digits; when n is not a multiple of 4 the
    last digit is right-padded with zero bits.
    """
    n = len(bits)
    width = max(1, -(-n // 4))
    packed = np.packbits(np.asarray(bits, dtype=np.uint8))
    return packed.tobytes().hex()[:width]


def _hex_to_bits(hexstr: str, n: int) -> np.ndarray:
    if len(hexstr) != max(1, -(-n // 4)):
        raise ValueError(f"hex string length {len(hexstr)} does not encode {n} bits")
    padded = hexstr if len(hexstr) % 2 == 0 else hexstr + "0"
    raw = np.frombuffer(bytes.fromhex(padded), dtype=np.uint8)
    return np.unpackbits(raw)[:n].copy()


@dataclass(frozen=True)
class ProductMeasure:
    """Product measure on {0,1}^m with rational biases q_i in (0,1)."""

    biases: tuple

    def __post_init__(self):
        biases = tuple(Fraction(q) for q in self.biases)
        for q in biases:
            if not (0 < q < 1):
                raise ValueError(f"bias {q} not strictly inside (0,1)")
        object.__setattr__(self, "biases", biases)

    @property
    def arity(self) -> int:
        return len(self.biases)

    @classmethod
    def uniform(cls, m: int, q=Fraction(1, 2)) -> "ProductMeasure":
        return cls((Fraction(q),) * m)

    def point_mass(self, x) -> Fraction:
        mass = Fraction(1)
        for xi, q in zip(x, self.biases):
            mass *= q if xi else 1 - q
        return mass

    def weight_numerators(self, skip: int | None = None):
        """Numerator array over the cube of coordinates != skip.

        Returns (numerators, denominator); numerators[j] / denominator is
        the point mass of the assignment whose bits, first coordinate most
        significant, spell j.  int64 is used when the denominator fits.
        """
        qs = [q for i, q in enumerate(self.biases) if i != skip]
        den = math.prod(q.denominator for q in qs)
        dtype = np.int64 if den < _INT64_SAFE else object
        w = np.ones(1, dtype=dtype)
        for q in qs:
            a, d = q.numerator, q.denominator
            pair = np.array([d - a, a], dtype=dtype)
            w = np.kron(w, pair)
        return w, den


def parse_measure(designator: str, arity: int) -> ProductMeasure:
    """Parse ``q=<rational>`` (uniform bias) or ``q=<r1,r2,...>``."""
    d = designator.strip()
    if not d.startswith("q="):
        raise ValueError(f"measure designator {designator!r} must start with 'q='")
    body = d[2:]
    parts = [Fraction(p) for p in body.split(",")]
    if len(parts) == 1:
        return ProductMeasure.uniform(arity, parts[0])
    if len(parts) != arity:
        raise ValueError(f"measure lists {len(parts)} biases for arity {arity}")
    return ProductMeasure(tuple(parts))


@dataclass(frozen=True)
class CubeFunction:
    """Dense truth table over {0,1}^m, coordinate 1 = MSB of the index."""

    arity: int
    table: np.ndarray

    def __post_init__(self):
        if not (0 <= self.arity <= MAX_ARITY):
            raise ValueError(f"arity {self.arity} exceeds the dense cap {MAX_ARITY}")
        table = np.ascontiguousarray(np.asarray(self.table, dtype=np.uint8))
        if table.shape != (1 << self.arity,):
            raise ValueError("table length must be exactly 2^m")
        if np.any(table > 1):
            raise ValueError("table entries must be bits")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def tensor(self) -> np.ndarray:
        """View shaped (2,)*m with axis i-1 indexing coordinate i."""
        return self.table.reshape((2,) * self.arity)

    def __eq__(self, other):
        return (
            isinstance(other, CubeFunction)
            and self.arity == other.arity
            and np.array_equal(self.table, other.table)
        )

    def to_text(self) -> str:
        return f"m={self.arity}\n{_bits_to_hex(self.table)}\n"

    @classmethod
    def from_text(cls, text: str) -> "CubeFunction":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if len(lines) < 2 or not lines[0].startswith("m="):
            raise ValueError("truth-table file must start with 'm=<int>'")
        m = int(lines[0][2:])
        return cls(m, _hex_to_bits(lines[1], 1 << m))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "CubeFunction":
        with open(path) as fh:
            return cls.from_text(fh.read())


def _check_arity(f: CubeFunction, mu: ProductMeasure):
    if mu.arity != f.arity:
        raise ValueError(f"measure arity {mu.arity} != function arity {f.arity}")


def cube_expectation(f: CubeFunction, mu: ProductMeasure) -> Fraction:
    """Exact mu-weighted mean of the truth table."""
    _check_arity(f, mu)
    w, den = mu.weight_numerators()
    total = int(np.sum(w[f.table == 1], dtype=object)) if w.dtype == object else int(w[f.table == 1].sum())
    return Fraction(total, den)


def cube_h_influence(f: CubeFunction, mu: ProductMeasure, k: int, h) -> Fraction | float:
    """h-influence of coordinate k (1-based): E over fibers of h(fiber mean).

    The fiber mean is the exact rational q_k*f(x_k=1) + (1-q_k)*f(x_k=0);
    the kernel is the only potentially floating-point step.
    """
    _check_arity(f, mu)
    if not (1 <= k <= f.arity):
        raise ValueError(f"coordinate {k} out of range 1..{f.arity}")
    t = f.tensor()
    f0 = np.take(t, 0, axis=k - 1).ravel()
    f1 = np.take(t, 1, axis=k - 1).ravel()
    w, den = mu.weight_numerators(skip=k - 1)
    qk = mu.biases[k - 1]
    means = {0: Fraction(0), 1: 1 - qk, 2: qk, 3: Fraction(1)}
    cls = f0 + 2 * f1
    result = Fraction(0)
    for c in range(4):
        sel = w[cls == c]
        total = int(np.sum(sel, dtype=object)) if w.dtype == object else int(sel.sum())
        if total:
            result = result + Fraction(total, den) * h(means[c])
    return result


def cube_influence_vector(f: CubeFunction, mu: ProductMeasure, h) -> list:
    return [cube_h_influence(f, mu, k, h) for k in range(1, f.arity + 1)]


def cube_boundary_measure(A: CubeFunction, mu: ProductMeasure) -> Fraction:
    """mu-mass of {x in A : some fiber through x is nonconstant}."""
    _check_arity(A, mu)
    t = A.tensor()
    nonconst = np.zeros(t.shape, dtype=bool)
    for axis in range(A.arity):
        diff = np.take(t, 0, axis=axis) != np.take(t, 1, axis=axis)
        nonconst |= np.expand_dims(diff, axis)
    mask = ((t == 1) & nonconst).ravel()
    w, den = mu.weight_numerators()
    total = int(np.sum(w[mask], dtype=object)) if w.dtype == object else int(w[mask].sum())
    return Fraction(total, den)


def is_monotone_cube(f: CubeFunction) -> bool:
    t = f.tensor()
    return all(
        np.all(np.take(t, 0, axis=a) <= np.take(t, 1, axis=a)) for a in range(f.arity)
    )


def enumerate_monotone(m: int):
    """All monotone truth tables on {0,1}^m, as CubeFunctions (m <= 4)."""
    if m > 4:
        raise ValueError("exhaustive monotone enumeration capped at m=4")
    size = 1 << m
    n_tables = 1 << size
    idx = np.arange(n_tables, dtype=np.uint32)
    # bits[t, x] = value of table t at point x (coordinate 1 = MSB of x)
    bits = (idx[:, None] >> np.arange(size - 1, -1, -1)[None, :]) & 1
    ok = np.ones(n_tables, dtype=bool)
    for j in range(m):
        step = 1 << (m - 1 - j)
        lo = [x for x in range(size) if not (x & step)]
        hi = [x | step for x in lo]
        ok &= np.all(bits[:, lo] <= bits[:, hi], axis=1)
    for t in np.nonzero(ok)[0]:
        yield CubeFunction(m, bits[t].astype(np.uint8))
