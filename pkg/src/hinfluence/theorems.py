"""Inequality evaluators: both sides of each bound, with empirical ratios.

The universal constants in the underlying statements are unspecified, so
each evaluator reports lhs, rhs and their ratio rather than pass/fail;
sweeping families and logging the ratio extremes is the whole point.
Exact rational quantities stay exact; kernel-valued sums may be floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.integrate import quad

from .cube import (
    CubeFunction,
    ProductMeasure,
    cube_expectation,
    cube_influence_vector,
    is_monotone_cube,
)
from .grid import (
    GridFunction,
    common_grid,
    grid_boundary_measure,
    grid_expectation,
    grid_influence_vector,
    intersection_mass,
)
from .kernels import catalogue_kernel
from .monotone import is_monotone

_INDICATOR = catalogue_kernel("indicator")


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


@dataclass(frozen=True)
class InequalityReport:
    """LHS/RHS/ratio record for one inequality instance."""

    name: str
    lhs: object
    rhs: object
    ratio: float
    parameters: dict = field(default_factory=dict)
    degenerate: bool = False

    def to_json_line(self) -> str:
        rec = {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "ratio": self.ratio,
            "degenerate": self.degenerate,
            "parameters": {k: _fmt(v) if isinstance(v, Fraction) else v
                           for k, v in self.parameters.items()},
        }
        if isinstance(self.lhs, Fraction):
            rec["lhs_exact"] = _fmt(self.lhs)
        if isinstance(self.rhs, Fraction):
            rec["rhs_exact"] = _fmt(self.rhs)
        return json.dumps(rec, sort_keys=True)

    def csv_row(self) -> list:
        params = ";".join(f"{k}={_fmt(v) if isinstance(v, Fraction) else v}"
                          for k, v in sorted(self.parameters.items()))
        return [
            self.name,
            str(self.parameters.get("n", "")),
            params,
            _fmt(self.lhs),
            repr(float(self.lhs)),
            _fmt(self.rhs),
            repr(float(self.rhs)),
            repr(self.ratio) if not self.degenerate else "degenerate",
        ]

    @staticmethod
    def csv_header() -> list:
        return ["name", "n", "params", "lhs", "lhs_float", "rhs", "rhs_float", "ratio"]


def _make_report(name, lhs, rhs, parameters, degenerate=False) -> InequalityReport:
    if degenerate or float(rhs) <= 0.0:
        return InequalityReport(name, lhs, rhs, float("nan"), parameters, True)
    return InequalityReport(name, lhs, rhs, float(lhs) / float(rhs), parameters)


class DegenerateInstance(ValueError):
    """Raised when an inequality's hypotheses exclude the instance."""


# ---------------------------------------------------------------------------
# BKKKL-type maximum-influence bound and the influence-sum bound
# ---------------------------------------------------------------------------

def bkkkl_from_values(n: int, p, influences, parameters=None) -> InequalityReport:
    """max_k I^h(k) versus p(1-p) log2(n)/n."""
    parameters = dict(parameters or {})
    parameters.setdefault("n", n)
    if p <= 0 or p >= 1:
        raise DegenerateInstance("constant function: p in {0,1}")
    lhs = max(influences)
    rhs = float(p * (1 - p)) * math.log2(n) / n
    return _make_report("bkkkl", lhs, rhs, parameters)


def bkkkl_report(f: GridFunction, h) -> InequalityReport:
    if f.arity < 2:
        raise ValueError("bkkkl requires n >= 2")
    p = grid_expectation(f)
    return bkkkl_from_values(f.arity, p, grid_influence_vector(f, h),
                             {"kernel": getattr(h, "name", "?")})


def kkl_sum_from_values(n: int, p, influences, parameters=None) -> InequalityReport:
    """sum_k I^h(k) versus p(1-p) log2(1/delta), delta = max_k I^h(k)."""
    parameters = dict(parameters or {})
    parameters.setdefault("n", n)
    if p <= 0 or p >= 1:
        raise DegenerateInstance("constant function: p in {0,1}")
    delta = max(influences)
    if delta <= 0:
        raise DegenerateInstance("all influences vanish")
    lhs = sum(influences)
    if float(delta) >= 1.0:
        return InequalityReport("kklsum", lhs, 0.0, float("nan"), parameters, True)
    rhs = float(p * (1 - p)) * math.log2(1.0 / float(delta))
    return _make_report("kklsum", lhs, rhs, parameters)


def kkl_sum_report(f: GridFunction, h) -> InequalityReport:
    p = grid_expectation(f)
    return kkl_sum_from_values(f.arity, p, grid_influence_vector(f, h),
                               {"kernel": getattr(h, "name", "?")})


# ---------------------------------------------------------------------------
# Talagrand-style vector bound
# ---------------------------------------------------------------------------

def _talagrand_term(x: float) -> float:
    # continuous extension: x / log2(4/(3x)) -> 0 as x -> 0
    if x == 0.0:
        return 0.0
    return x / math.log2(4.0 / (3.0 * x))


def talagrand_from_values(n: int, p, influences, parameters=None) -> InequalityReport:
    parameters = dict(parameters or {})
    parameters.setdefault("n", n)
    if p <= 0 or p >= 1:
        raise DegenerateInstance("constant function: p in {0,1}")
    vals = [float(v) for v in influences]
    if any(v >= 4.0 / 3.0 for v in vals):
        raise ValueError("talagrand bound requires all influences < 4/3")
    lhs = p * (1 - p)
    rhs = sum(_talagrand_term(v) for v in vals)
    return _make_report("talagrand", lhs, rhs, parameters)


def talagrand_report(f: GridFunction, h) -> InequalityReport:
    p = grid_expectation(f)
    return talagrand_from_values(f.arity, p, grid_influence_vector(f, h),
                                 {"kernel": getattr(h, "name", "?")})


# ---------------------------------------------------------------------------
# Boundary bound
# ---------------------------------------------------------------------------

def boundary_from_values(n: int, mass, boundary, influence_sum, parameters=None) -> InequalityReport:
    parameters = dict(parameters or {})
    parameters.setdefault("n", n)
    if mass <= 0:
        raise DegenerateInstance("empty set")
    if mass > Fraction(1, 2):
        raise ValueError("boundary bound requires lambda(A) <= 1/2")
    lhs = boundary * influence_sum
    rhs = float(mass) ** 2 * math.log2(math.e / float(mass))
    return _make_report("boundary", lhs, rhs, parameters)


def boundary_report(A: GridFunction, h) -> InequalityReport:
    if not is_monotone(A):
        raise ValueError("boundary bound requires a monotone set")
    mass = grid_expectation(A)
    return boundary_from_values(
        A.arity,
        mass,
        grid_boundary_measure(A),
        sum(grid_influence_vector(A, h)),
        {"kernel": getattr(h, "name", "?")},
    )


# ---------------------------------------------------------------------------
# Correlation bounds
# ---------------------------------------------------------------------------

def normalization_constant(alpha: float) -> float:
    """c(alpha): reciprocal squared norm of t -> alpha(2t-1)[t(1-t)]^(alpha-1).

    Adaptive quadrature with the interval split at 1/2; the endpoint
    singularities t^(2 alpha - 2) are integrable for alpha > 1/2.
    """
    if not (0.5 < alpha <= 1.0):
        raise ValueError("normalization constant requires alpha in (1/2, 1]")

    def integrand(t):
        return (alpha * (2.0 * t - 1.0)) ** 2 * (t * (1.0 - t)) ** (2.0 * alpha - 2.0)

    left, _ = quad(integrand, 0.0, 0.5, epsabs=0.0, epsrel=1e-10, limit=400)
    right, _ = quad(integrand, 0.5, 1.0, epsabs=0.0, epsrel=1e-10, limit=400)
    return 1.0 / (left + right)


def correlation_from_components(gap, product_sum, alpha, parameters=None) -> InequalityReport:
    c = normalization_constant(alpha)
    parameters = dict(parameters or {})
    parameters["alpha"] = alpha
    rhs = c * float(product_sum)
    return _make_report("correlation", gap, rhs, parameters)


def correlation_report(T, alpha: float, parameters=None) -> InequalityReport:
    """Averaged correlation gap versus c(alpha) * sum of influence products.

    T is a family of monotone grid functions; members are refined to a
    common per-axis lcm grid.  The sum runs over ordered pairs.
    """
    members = list(T)
    if not members:
        raise ValueError("empty family")
    for f in members:
        if not is_monotone(f):
            raise ValueError("correlation bound requires monotone members")
    members = common_grid(members)
    h = catalogue_kernel("alpha", alpha)
    masses = [grid_expectation(f) for f in members]
    influences = [grid_influence_vector(f, h) for f in members]
    gap = Fraction(0)
    product_sum = 0.0
    for a, fa in enumerate(members):
        for b, fb in enumerate(members):
            gap += intersection_mass(fa, fb) - masses[a] * masses[b]
            product_sum += sum(float(x) * float(y) for x, y in zip(influences[a], influences[b]))
    params = dict(parameters or {})
    params.setdefault("n", members[0].arity)
    params["family_size"] = len(members)
    return correlation_from_components(gap, product_sum, alpha, params)


def harris_kleitman_check(A: CubeFunction, B: CubeFunction, mu: ProductMeasure) -> bool:
    """Exact check of mu(A cap B) >= mu(A) mu(B) for monotone A, B."""
    if not is_monotone_cube(A) or not is_monotone_cube(B):
        raise ValueError("Harris-Kleitman requires monotone sets")
    inter = CubeFunction(A.arity, A.table & B.table)
    return cube_expectation(inter, mu) >= cube_expectation(A, mu) * cube_expectation(B, mu)


def averaged_correlation_check(T) -> InequalityReport:
    """Exact averaged-correlation bound on the uniform discrete cube.

    lhs = sum over ordered pairs of the correlation gap; rhs = 1/4 times
    the sum of products of indicator influences.  Both sides are dyadic
    rationals; the ratio should be >= 1.
    """
    members = list(T)
    if not members:
        raise ValueError("empty family")
    m = members[0].arity
    mu = ProductMeasure.uniform(m)
    for f in members:
        if f.arity != m:
            raise ValueError("family members must share an arity")
        if not is_monotone_cube(f):
            raise ValueError("averaged correlation requires monotone members")
    masses = [cube_expectation(f, mu) for f in members]
    influences = [cube_influence_vector(f, mu, _INDICATOR) for f in members]
    lhs = Fraction(0)
    rhs = Fraction(0)
    for a, fa in enumerate(members):
        for b, fb in enumerate(members):
            inter = CubeFunction(m, fa.table & fb.table)
            lhs += cube_expectation(inter, mu) - masses[a] * masses[b]
            rhs += sum(x * y for x, y in zip(influences[a], influences[b]))
    rhs = Fraction(1, 4) * rhs
    params = {"n": m, "family_size": len(members)}
    return _make_report("avgcorr", lhs, rhs, params, degenerate=(rhs == 0))


# ---------------------------------------------------------------------------
# Junta approximation
# ---------------------------------------------------------------------------

def best_junta_error(f: CubeFunction, mu: ProductMeasure, J) -> Fraction:
    """Minimal ||f-g||_2^2 over Boolean g depending only on coordinates J.

    Equals the mu-weighted sum over J-assignments of min(p_a, 1-p_a)
    where p_a is the conditional mean of f; computed exactly.
    """
    if mu.arity != f.arity:
        raise ValueError("measure/function arity mismatch")
    J = sorted(set(J))
    if any(not (1 <= j <= f.arity) for j in J):
        raise ValueError("junta coordinates out of range")
    m = f.arity
    w, den = mu.weight_numerators()
    order = [j - 1 for j in J] + [a for a in range(m) if a + 1 not in J]
    wt = w.reshape((2,) * m).transpose(order).reshape(1 << len(J), -1)
    ft = (f.table * w).reshape((2,) * m).transpose(order).reshape(1 << len(J), -1)
    if w.dtype == object:
        w_group = [int(x) for x in np.sum(wt, axis=1)]
        wf_group = [int(x) for x in np.sum(ft, axis=1)]
    else:
        w_group = wt.sum(axis=1)
        wf_group = ft.sum(axis=1)
    total = sum(min(int(wf), int(wa) - int(wf)) for wa, wf in zip(w_group, wf_group))
    return Fraction(total, den)


def min_junta_size(f: CubeFunction, mu: ProductMeasure, eps) -> tuple:
    """Smallest junta within L2^2 error eps, with a witness set.

    Exhaustive over subsets by increasing size for m <= 12; greedy
    forward selection above that (m capped at 16).
    """
    m = f.arity
    if m > 16:
        raise ValueError("junta search capped at m=16")
    if m <= 12:
        for size in range(m + 1):
            for J in combinations(range(1, m + 1), size):
                if best_junta_error(f, mu, J) <= eps:
                    return size, tuple(J)
        raise AssertionError("unreachable: the full coordinate set has error 0")
    J: list = []
    remaining = list(range(1, m + 1))
    while best_junta_error(f, mu, J) > eps:
        best = min(remaining, key=lambda j: best_junta_error(f, mu, J + [j]))
        J.append(best)
        remaining.remove(best)
    return len(J), tuple(sorted(J))
