"""Canonical function families with closed-form oracles.

Each generator returns a FamilyInstance bundling the realized function
(dense, when it fits under the cell caps) with exact analytic values:
expectation and a per-coordinate fiber profile, i.e. the full (weight,
fiber-mean) distribution.  The analytic h-influence of any kernel is then
sum of weight * h(mean), which the realized computation must reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cube import MAX_ARITY, CubeFunction
from .discretize import lift_biased
from .grid import MAX_CELLS, GridFunction


@dataclass(frozen=True)
class FamilyInstance:
    """A generated function plus its closed-form quantities.

    ``analytic['profile']`` holds, per coordinate, the exact distribution
    of (fiber weight, fiber mean) pairs; weights sum to 1.  ``realized``
    is None when the dense table would exceed the cell cap; the analytic
    values remain available (and are cross-checked against brute force at
    small sizes in the test suite).
    """

    family: str
    parameters: dict
    realized: object  # GridFunction | CubeFunction | None
    analytic: dict
    lifted: GridFunction | None = None

    @property
    def expectation(self) -> Fraction:
        return self.analytic["expectation"]

    @property
    def arity(self) -> int:
        return len(self.analytic["profile"])

    def analytic_influence(self, k: int, h):
        """h-influence of coordinate k from the fiber profile."""
        return sum(w * h(t) for w, t in self.analytic["profile"][k - 1] if w)

    def analytic_influences(self, h) -> list:
        return [self.analytic_influence(k, h) for k in range(1, self.arity + 1)]


def corner(n: int, resolution: int | None = None) -> FamilyInstance:
    """Indicator of {x : x_i > 1/n for all i} on [0,1]^n.

    ``resolution`` must be a multiple of n (default n).  The dense grid is
    realized only when resolution^n fits under the cell cap; the analytic
    profile is exact for every n.
    """
    if n < 2:
        raise ValueError("corner requires n >= 2")
    resolution = n if resolution is None else int(resolution)
    if resolution < n or resolution % n != 0:
        raise ValueError(f"resolution {resolution} must be a multiple of n={n}")
    one_n = Fraction(1, n)
    w_nc = (1 - one_n) ** (n - 1)
    profile = tuple(
        ((w_nc, 1 - one_n), (1 - w_nc, Fraction(0))) for _ in range(n)
    )
    analytic = {
        "expectation": (1 - one_n) ** n,
        "profile": profile,
        "boundary": (1 - one_n) ** n,  # every corner cell sits on a nonconstant line
    }
    realized = None
    if resolution**n <= MAX_CELLS:
        threshold = resolution // n
        axis = (np.arange(resolution) >= threshold).astype(np.uint8)
        cells = np.ones((resolution,) * n, dtype=np.uint8)
        for a in range(n):
            shape = [1] * n
            shape[a] = resolution
            cells &= axis.reshape(shape)
        realized = GridFunction((resolution,) * n, cells)
    return FamilyInstance("corner", {"n": n, "resolution": resolution}, realized, analytic)


def _check_bias(q) -> Fraction:
    q = Fraction(q)
    if not (0 < q < 1):
        raise ValueError(f"bias {q} not strictly inside (0,1)")
    if q > Fraction(1, 2):
        raise ValueError("q > 1/2 is handled through the dual transform; generate at 1-q and dualize")
    return q


def _tribes_table(n: int, r: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=bool)
    for i in range(n // r):
        mask = 0
        for j in range(i * r + 1, (i + 1) * r + 1):  # coords are 1-based, MSB first
            mask |= 1 << (n - j)
        out |= (idx & mask) == mask
    return out.astype(np.uint8)


def tribes(n: int, r: int, q) -> FamilyInstance:
    """Disjunction of n/r disjoint AND-blocks of size r, under mu_q."""
    if r < 1 or n % r != 0:
        raise ValueError(f"tribe size {r} must divide n={n}")
    q = _check_bias(q)
    blocks = n // r
    w1 = 1 - (1 - q**r) ** (blocks - 1)
    w_nc = q ** (r - 1) * (1 - q**r) ** (blocks - 1)
    w0 = 1 - w1 - w_nc
    profile = tuple(((w_nc, q), (w1, Fraction(1)), (w0, Fraction(0))) for _ in range(n))
    analytic = {
        "expectation": 1 - (1 - q**r) ** blocks,
        "profile": profile,
    }
    realized = CubeFunction(n, _tribes_table(n, r)) if n <= MAX_ARITY else None
    lifted = None
    if realized is not None and q.denominator**n <= MAX_CELLS:
        lifted = lift_biased(realized, q)
    return FamilyInstance("tribes", {"n": n, "r": r, "q": q}, realized, analytic, lifted)


def tribes_r_hint(n: int, q) -> float:
    """The paper-style real-valued tribe size; round to a divisor of n."""
    q = Fraction(q)
    if n < 4:
        raise ValueError("tribes_r_hint requires n >= 4")
    if not (0 < q <= Fraction(1, 2)):
        raise ValueError("tribes_r_hint requires 0 < q <= 1/2")
    log_inv_q = math.log2(1 / q)  # >= 1 for q <= 1/2
    num = math.log2(n) - math.log2(math.log2(n)) + math.log2(log_inv_q)
    return num / log_inv_q


def padded_tribes(n: int, m: int, r: int, q) -> FamilyInstance:
    """Tribes on the first m of n coordinates; the rest are inert."""
    if not (0 < m < n):
        raise ValueError("padded tribes requires 0 < m < n")
    base = tribes(m, r, q)
    e = base.expectation
    inert = ((e, Fraction(1)), (1 - e, Fraction(0)))
    profile = base.analytic["profile"] + tuple(inert for _ in range(n - m))
    analytic = {"expectation": e, "profile": profile}
    realized = None
    if n <= MAX_ARITY and base.realized is not None:
        t = base.realized.table
        table = np.repeat(t, 1 << (n - m))  # padded coords are the low-order bits
        realized = CubeFunction(n, table)
    lifted = None
    q = Fraction(q)
    if realized is not None and q.denominator**n <= MAX_CELLS:
        lifted = lift_biased(realized, q)
    params = {"n": n, "m": m, "r": r, "q": q}
    return FamilyInstance("padded_tribes", params, realized, analytic, lifted)


def _binom_tail(n: int, q: Fraction, lo: int, hi: int) -> Fraction:
    """P(lo <= Binomial(n, q) <= hi), exact."""
    total = Fraction(0)
    for s in range(max(lo, 0), min(hi, n) + 1):
        total += math.comb(n, s) * q**s * (1 - q) ** (n - s)
    return total


def threshold_family(n: int, q) -> FamilyInstance:
    """Indicator of {sum x_i > floor(n*q)} on {0,1}^n under mu_q."""
    if n > 20:
        raise ValueError("threshold family capped at n=20 for exact binomials")
    q = _check_bias(q)
    t = math.floor(n * q)
    w1 = _binom_tail(n - 1, q, t + 1, n - 1)
    w_nc = _binom_tail(n - 1, q, t, t)
    w0 = 1 - w1 - w_nc
    profile = tuple(((w_nc, q), (w1, Fraction(1)), (w0, Fraction(0))) for _ in range(n))
    analytic = {
        "expectation": _binom_tail(n, q, t + 1, n),
        "profile": profile,
        "boundary": _binom_tail(n, q, t + 1, t + 1),  # A-side boundary
        "two_sided_band": _binom_tail(n, q, t, t + 1),
    }
    idx = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pop += (idx >> b) & 1
    realized = CubeFunction(n, (pop > t).astype(np.uint8))
    lifted = lift_biased(realized, q) if q.denominator**n <= MAX_CELLS else None
    return FamilyInstance("threshold", {"n": n, "q": q, "t": t}, realized, analytic, lifted)


def random_grid(n: int, resolutions, density: float, seed: int) -> GridFunction:
    """Reproducible random bit table with the given one-density."""
    if isinstance(resolutions, int):
        resolutions = (resolutions,) * n
    resolutions = tuple(int(r) for r in resolutions)
    if math.prod(resolutions) > MAX_CELLS:
        raise ValueError("cell cap exceeded")
    rng = np.random.default_rng(seed)
    cells = (rng.random(resolutions) < density).astype(np.uint8)
    return GridFunction(resolutions, cells)


def parse_family(designator: str):
    """Parse a family designator into a FamilyInstance or loaded function.

    Grammar: ``corner:n=4,r=4`` | ``tribes:n=8,r=2,q=1/2`` |
    ``threshold:n=6,q=1/3`` | ``padded:n=8,m=4,r=2,q=1/2`` |
    ``random:n=3,r=4,density=0.5,seed=7`` | ``file:<path>``.
    """
    d = designator.strip()
    if d.startswith("file:"):
        path = d[5:]
        with open(path) as fh:
            text = fh.read()
        first = text.strip().splitlines()[0]
        if first.startswith("m="):
            return CubeFunction.from_text(text)
        return GridFunction.from_text(text)
    if ":" not in d:
        raise ValueError(f"malformed family designator {designator!r}")
    name, body = d.split(":", 1)
    kv = {}
    for part in body.split(","):
        key, val = part.split("=")
        kv[key.strip()] = val.strip()
    if name == "corner":
        return corner(int(kv["n"]), int(kv["r"]) if "r" in kv else None)
    if name == "tribes":
        return tribes(int(kv["n"]), int(kv["r"]), Fraction(kv["q"]))
    if name == "threshold":
        return threshold_family(int(kv["n"]), Fraction(kv["q"]))
    if name == "padded":
        return padded_tribes(int(kv["n"]), int(kv["m"]), int(kv["r"]), Fraction(kv["q"]))
    if name == "random":
        return random_grid(int(kv["n"]), int(kv["r"]), float(kv["density"]), int(kv["seed"]))
    raise ValueError(f"unknown family {name!r}")
