"""Influence kernels h:[0,1] -> [0,1] and their structural checks.

A kernel turns a fiber mean into an influence contribution.  The catalogue
covers the classical nonconstancy indicator, the variance kernel t(1-t),
the binary entropy function, the power family [t(1-t)]^alpha, and the two
directional kernels.  Concavity and entropy domination are checked
numerically on a uniform grid; kernels are user-extensible via tabulated
values, so no symbolic reasoning is attempted.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

CHECK_SLACK = 1e-12
DEFAULT_CHECK_STEPS = 4096

CATALOGUE_NAMES = ("indicator", "variance", "entropy", "alpha", "toward_zero", "toward_one")


def entropy(t):
    """Binary entropy -t*log2(t) - (1-t)*log2(1-t), 0 at the endpoints.

    Accepts Fractions or floats in [0,1]; always returns a float.
    """
    if t < 0 or t > 1:
        raise ValueError(f"entropy argument {t} outside [0,1]")
    if t == 0 or t == 1:
        return 0.0
    x = float(t)
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


@dataclass(frozen=True)
class InfluenceKernel:
    """A kernel h with its declared structural flags.

    ``fn`` may be called with a Fraction or a float in [0,1].  Kernels that
    can be evaluated exactly on rationals (indicator, variance, the
    directional pair) return Fractions/ints for Fraction input, which lets
    downstream sums stay exact.
    """

    name: str
    fn: Callable = field(repr=False)
    declared_concave: bool = False
    declared_dominates_entropy: bool = False

    def __call__(self, t):
        if t < 0 or t > 1:
            raise ValueError(f"kernel {self.name!r} argument {t} outside [0,1]")
        return self.fn(t)


def _indicator(t):
    return 0 if (t == 0 or t == 1) else 1


def _variance(t):
    return t * (1 - t)


def _toward_zero(t):
    return 0 if t == 1 else t


def _toward_one(t):
    return 0 if t == 0 else 1 - t


def catalogue_kernel(name: str, parameter=None) -> InfluenceKernel:
    """Return a named kernel from the catalogue.

    ``alpha`` requires a parameter in (0,1]; the other names take none.
    """
    if name == "indicator":
        # Concavity flag follows the numeric checker; see check_concave.
        return InfluenceKernel("indicator", _indicator, True, True)
    if name == "variance":
        return InfluenceKernel("variance", _variance, True, False)
    if name == "entropy":
        return InfluenceKernel("entropy", entropy, True, True)
    if name == "alpha":
        if parameter is None or not (0 < parameter <= 1):
            raise ValueError("alpha kernel requires a parameter in (0,1]")
        a = float(parameter)

        def _alpha(t, _a=a):
            return float(t * (1 - t)) ** _a

        return InfluenceKernel(f"alpha:{a:g}", _alpha, True, False)
    if name == "toward_zero":
        return InfluenceKernel("toward_zero", _toward_zero, True, False)
    if name == "toward_one":
        return InfluenceKernel("toward_one", _toward_one, True, False)
    raise ValueError(f"unknown kernel name {name!r}")


def tabulated_kernel(points, name="table") -> InfluenceKernel:
    """Kernel given by (t, value) pairs with linear interpolation.

    The grid must include t=0 and t=1; values must lie in [0,1].
    Declared flags are taken from the numeric checkers.
    """
    pts = sorted((float(t), float(v)) for t, v in points)
    ts = np.array([t for t, _ in pts])
    vs = np.array([v for _, v in pts])
    if len(ts) < 2 or ts[0] != 0.0 or ts[-1] != 1.0:
        raise ValueError("tabulated kernel must include t=0 and t=1")
    if np.any(vs < 0) or np.any(vs > 1):
        raise ValueError("tabulated kernel values must lie in [0,1]")

    def _interp(t, _ts=ts, _vs=vs):
        return float(np.interp(float(t), _ts, _vs))

    k = InfluenceKernel(name, _interp)
    return InfluenceKernel(
        name,
        _interp,
        declared_concave=check_concave(k, DEFAULT_CHECK_STEPS),
        declared_dominates_entropy=check_dominates_entropy(k, DEFAULT_CHECK_STEPS),
    )


def load_tabulated_kernel(path) -> InfluenceKernel:
    """Read a t,value CSV (header optional) into a tabulated kernel."""
    points = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                t = float(Fraction(row[0]))
            except ValueError:
                continue  # header line
            points.append((t, float(Fraction(row[1]))))
    return tabulated_kernel(points, name=f"table:{path}")


def _grid_values(h: InfluenceKernel, steps: int) -> np.ndarray:
    return np.array([float(h(Fraction(k, steps))) for k in range(steps + 1)])


def check_concave(h: InfluenceKernel, steps: int = DEFAULT_CHECK_STEPS) -> bool:
    """Midpoint concavity of h on the closed grid {k/steps}.

    Tests every grid triple (a, (a+b)/2, b) whose midpoint lies on the
    grid: h(mid) >= (h(a)+h(b))/2 - slack.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    v = _grid_values(h, steps)
    for gap in range(1, steps // 2 + 1):
        mid = v[gap : steps + 1 - gap]
        if np.any(mid < (v[: steps + 1 - 2 * gap] + v[2 * gap :]) / 2.0 - CHECK_SLACK):
            return False
    return True


def check_dominates_entropy(h: InfluenceKernel, steps: int = DEFAULT_CHECK_STEPS) -> bool:
    """True iff h(k/steps) >= Ent(k/steps) - slack for all 0 <= k <= steps."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    v = _grid_values(h, steps)
    e = np.array([entropy(Fraction(k, steps)) for k in range(steps + 1)])
    return bool(np.all(v >= e - CHECK_SLACK))


def parse_kernel(designator: str) -> InfluenceKernel:
    """Parse a CLI kernel designator.

    Grammar: ``ent`` | ``var`` | ``ind`` | ``alpha:<float>`` | ``t0`` |
    ``t1`` | ``table:<path>``.
    """
    d = designator.strip()
    short = {"ent": "entropy", "var": "variance", "ind": "indicator",
             "t0": "toward_zero", "t1": "toward_one"}
    if d in short:
        return catalogue_kernel(short[d])
    if d.startswith("alpha:"):
        return catalogue_kernel("alpha", float(d.split(":", 1)[1]))
    if d.startswith("table:"):
        return load_tabulated_kernel(d.split(":", 1)[1])
    raise ValueError(f"unknown kernel designator {designator!r}")
