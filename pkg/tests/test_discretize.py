"""Bit expansion of monotone grids, the biased lift, and the dual."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hinfluence.cube import (
    CubeFunction,
    ProductMeasure,
    cube_expectation,
    cube_h_influence,
)
from hinfluence.discretize import (
    BitGrouping,
    default_bits,
    discretize,
    dual,
    grouped_bit_influence_sums,
    lift_biased,
)
from hinfluence.grid import GridFunction, grid_expectation, grid_h_influence
from hinfluence.kernels import catalogue_kernel, entropy
from hinfluence.monotone import monotonize

IND = catalogue_kernel("indicator")
ENT = catalogue_kernel("entropy")
VAR = catalogue_kernel("variance")

THRESHOLD_1D = GridFunction((8,), (np.arange(8) >= 3).astype(np.uint8))


def random_monotone_grid(seed, max_n=3, allowed_r=(1, 2, 4, 8)):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1))
    res = tuple(int(rng.choice(allowed_r)) for _ in range(n))
    g = GridFunction(res, (rng.random(res) < rng.random()).astype(np.uint8))
    return monotonize(g)


class TestDefaultBits:
    def test_values(self):
        assert default_bits(1) == 1
        assert default_bits(2) == 3
        assert default_bits(8) == 9


class TestDiscretize:
    def test_one_dim_threshold_table(self):
        g, grouping = discretize(THRESHOLD_1D, 3)
        assert g.arity == 3
        # g(m) = 1 iff the cell index m is at least 3
        assert list(g.table) == [1 if m >= 3 else 0 for m in range(8)]
        assert grouping.groups == {1: (3, 2, 1)}

    def test_one_dim_threshold_bit_influences(self):
        g, grouping = discretize(THRESHOLD_1D, 3)
        mu = ProductMeasure.uniform(3)
        # coordinate list is ordered by place value, least significant first
        per_bit = [cube_h_influence(g, mu, c, IND) for c in grouping.groups[1]]
        assert per_bit == [Fraction(1, 4), Fraction(1, 4), Fraction(3, 4)]
        assert grouped_bit_influence_sums(g, grouping, mu) == [Fraction(5, 4)]

    def test_requires_monotone(self):
        xor = GridFunction((2, 2), np.array([[0, 1], [1, 0]], dtype=np.uint8))
        with pytest.raises(ValueError):
            discretize(xor, 2)

    def test_requires_divisibility(self):
        g = GridFunction((3,), np.array([0, 1, 1], dtype=np.uint8))
        with pytest.raises(ValueError):
            discretize(g, 3)

    def test_arity_cap(self):
        g = GridFunction((2,) * 13, np.ones((2,) * 13, dtype=np.uint8))
        with pytest.raises(ValueError):
            discretize(g, 2)

    @given(st.integers(0, 2**30))
    @settings(max_examples=40, deadline=None)
    def test_expectation_preserved(self, seed):
        f = random_monotone_grid(seed)
        l = 3
        g, _ = discretize(f, l)
        assert cube_expectation(g, ProductMeasure.uniform(g.arity)) == grid_expectation(f)

    @given(st.integers(0, 2**30))
    @settings(max_examples=25, deadline=None)
    def test_values_agree_on_cells(self, seed):
        f = random_monotone_grid(seed, max_n=2)
        l = 4
        g, _ = discretize(f, l)
        rng = np.random.default_rng(seed + 7)
        t = g.tensor()
        for _ in range(20):
            cell = tuple(int(rng.integers(0, r)) for r in f.resolutions)
            # embed each cell index in the finer dyadic grid
            bits = []
            for j, r in zip(cell, f.resolutions):
                fine = j * ((1 << l) // r)
                bits.extend((fine >> (l - 1 - b)) & 1 for b in range(l))
            assert t[tuple(bits)] == f.cells[cell]

    @given(st.integers(0, 2**30))
    @settings(max_examples=20, deadline=None)
    def test_grouped_sums_bounded_by_entropy_influence(self, seed):
        f = random_monotone_grid(seed, max_n=2)
        g, grouping = discretize(f, 4)
        mu = ProductMeasure.uniform(g.arity)
        sums = grouped_bit_influence_sums(g, grouping, mu)
        for i, s in enumerate(sums, start=1):
            assert float(s) <= 6.0 * float(grid_h_influence(f, i, ENT)) + 1e-9


class TestBitGrouping:
    def test_text_roundtrip(self):
        _, grouping = discretize(THRESHOLD_1D, 3)
        assert BitGrouping.from_text(grouping.to_text()) == grouping

    def test_mismatch_rejected(self):
        g, grouping = discretize(THRESHOLD_1D, 3)
        bad = BitGrouping(2, 3, {1: (3, 2, 1), 2: (6, 5, 4)})
        with pytest.raises(ValueError):
            grouped_bit_influence_sums(g, bad, ProductMeasure.uniform(3))


class TestLift:
    def test_or2_expectation(self):
        or2 = CubeFunction(2, [0, 1, 1, 1])
        g = lift_biased(or2, Fraction(1, 3))
        assert g.resolutions == (3, 3)
        assert grid_expectation(g) == Fraction(5, 9)

    def test_cell_structure(self):
        dictator = CubeFunction(1, [0, 1])
        g = lift_biased(dictator, Fraction(1, 4))
        assert list(g.cells) == [0, 0, 0, 1]

    @pytest.mark.parametrize("q", [Fraction(1, 3), Fraction(1, 2), Fraction(2, 5)])
    def test_entropy_identity(self, q):
        from hinfluence.families import tribes

        f = tribes(4, 2, Fraction(1, 2)).realized
        mu = ProductMeasure.uniform(4, q)
        g = lift_biased(f, q)
        assert grid_expectation(g) == cube_expectation(f, mu)
        for k in range(1, 5):
            lifted = grid_h_influence(g, k, ENT)
            expected = entropy(q) * float(cube_h_influence(f, mu, k, IND))
            assert lifted == pytest.approx(expected, abs=1e-12)

    def test_bias_validation(self):
        with pytest.raises(ValueError):
            lift_biased(CubeFunction(1, [0, 1]), Fraction(1))


class TestDual:
    def test_or_becomes_and(self):
        or2 = CubeFunction(2, [0, 1, 1, 1])
        assert dual(or2) == CubeFunction(2, [0, 0, 0, 1])

    @given(st.integers(0, 2**16 - 1))
    @settings(max_examples=40)
    def test_involution_and_expectation(self, tbl):
        f = CubeFunction(4, [(tbl >> i) & 1 for i in range(16)])
        d = dual(f)
        assert dual(d) == f
        mu = ProductMeasure.uniform(4)
        assert cube_expectation(d, mu) == 1 - cube_expectation(f, mu)

    @given(st.integers(0, 2**16 - 1))
    @settings(max_examples=30)
    def test_symmetric_kernel_influences_preserved(self, tbl):
        f = CubeFunction(4, [(tbl >> i) & 1 for i in range(16)])
        d = dual(f)
        mu = ProductMeasure.uniform(4)
        for k in range(1, 5):
            for h in (IND, VAR):
                assert cube_h_influence(d, mu, k, h) == cube_h_influence(f, mu, k, h)

    def test_biased_dual_expectation(self):
        f = CubeFunction(2, [0, 1, 1, 1])
        q = Fraction(1, 3)
        mu_q = ProductMeasure.uniform(2, q)
        mu_cq = ProductMeasure.uniform(2, 1 - q)
        assert cube_expectation(dual(f), mu_cq) == 1 - cube_expectation(f, mu_q)
