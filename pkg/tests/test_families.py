"""Canonical families: analytic oracles versus brute-force computation."""

import math
from fractions import Fraction

import numpy as np
import pytest

from hinfluence.cube import (
    CubeFunction,
    ProductMeasure,
    cube_boundary_measure,
    cube_expectation,
    cube_h_influence,
)
from hinfluence.families import (
    corner,
    padded_tribes,
    parse_family,
    random_grid,
    threshold_family,
    tribes,
    tribes_r_hint,
)
from hinfluence.grid import (
    GridFunction,
    grid_boundary_measure,
    grid_expectation,
    grid_h_influence,
)
from hinfluence.kernels import catalogue_kernel, entropy

IND = catalogue_kernel("indicator")
VAR = catalogue_kernel("variance")
ENT = catalogue_kernel("entropy")


class TestCorner:
    def test_exact_values_n4(self):
        fam = corner(4, 4)
        assert fam.expectation == Fraction(81, 256)
        assert fam.analytic_influence(1, IND) == Fraction(27, 64)
        assert fam.analytic_influence(1, VAR) == Fraction(81, 1024)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_analytic_matches_realized(self, n):
        fam = corner(n)
        g = fam.realized
        assert grid_expectation(g) == fam.expectation
        assert grid_boundary_measure(g) == fam.analytic["boundary"]
        for k in range(1, n + 1):
            for h in (IND, VAR):
                assert grid_h_influence(g, k, h) == fam.analytic_influence(k, h)
            assert grid_h_influence(g, k, ENT) == pytest.approx(
                fam.analytic_influence(k, ENT), abs=1e-9
            )

    def test_finer_resolution_same_values(self):
        fam = corner(3, 9)
        assert grid_expectation(fam.realized) == Fraction(8, 27)
        assert grid_h_influence(fam.realized, 1, IND) == Fraction(4, 9)

    def test_large_n_analytic_only(self):
        fam = corner(12)
        assert fam.realized is None
        assert fam.expectation == Fraction(11, 12) ** 12

    def test_validation(self):
        with pytest.raises(ValueError):
            corner(1)
        with pytest.raises(ValueError):
            corner(4, 6)


class TestTribes:
    def test_expectation(self):
        assert tribes(4, 2, Fraction(1, 2)).expectation == Fraction(7, 16)

    def test_influence_formula_vs_enumeration(self):
        for n, r, q in [(4, 2, Fraction(1, 2)), (6, 3, Fraction(1, 3)), (6, 2, Fraction(1, 4))]:
            fam = tribes(n, r, q)
            mu = ProductMeasure.uniform(n, q)
            for k in range(1, n + 1):
                expected = q ** (r - 1) * (1 - q**r) ** (n // r - 1)
                assert fam.analytic_influence(k, IND) == expected
                assert cube_h_influence(fam.realized, mu, k, IND) == expected

    def test_entropy_influence_6_3(self):
        fam = tribes(6, 3, Fraction(1, 2))
        val = fam.analytic_influence(1, ENT)
        assert val == pytest.approx(float(Fraction(7, 32)), abs=1e-12)

    def test_lifted_agrees(self):
        fam = tribes(4, 2, Fraction(1, 3))
        assert fam.lifted is not None
        assert grid_expectation(fam.lifted) == fam.expectation

    def test_validation(self):
        with pytest.raises(ValueError):
            tribes(4, 3, Fraction(1, 2))
        with pytest.raises(ValueError):
            tribes(4, 2, Fraction(2, 3))  # route through the dual instead

    def test_r_hint(self):
        assert tribes_r_hint(16, Fraction(1, 2)) == pytest.approx(2.0)
        assert tribes_r_hint(4, Fraction(1, 4)) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            tribes_r_hint(2, Fraction(1, 2))
        with pytest.raises(ValueError):
            tribes_r_hint(8, Fraction(2, 3))


class TestPaddedTribes:
    def test_inert_coordinates_have_zero_influence(self):
        fam = padded_tribes(6, 4, 2, Fraction(1, 2))
        mu = ProductMeasure.uniform(6)
        for k in (5, 6):
            assert fam.analytic_influence(k, IND) == 0
            assert cube_h_influence(fam.realized, mu, k, IND) == 0

    def test_influence_sum_equals_base(self):
        base = tribes(4, 2, Fraction(1, 2))
        fam = padded_tribes(6, 4, 2, Fraction(1, 2))
        assert sum(fam.analytic_influences(IND)) == sum(base.analytic_influences(IND))

    def test_realized_depends_only_on_prefix(self):
        fam = padded_tribes(6, 4, 2, Fraction(1, 2))
        t = fam.realized.tensor()
        assert np.array_equal(t[..., 0, 0], t[..., 1, 1])

    def test_validation(self):
        with pytest.raises(ValueError):
            padded_tribes(4, 4, 2, Fraction(1, 2))


class TestThreshold:
    def test_n4_uniform(self):
        fam = threshold_family(4, Fraction(1, 2))
        assert fam.expectation == Fraction(5, 16)
        assert fam.analytic_influence(1, IND) == Fraction(3, 8)
        assert sum(fam.analytic_influences(IND)) == Fraction(3, 2)
        assert fam.analytic["two_sided_band"] == Fraction(10, 16)

    def test_boundary_matches_enumeration(self):
        fam = threshold_family(4, Fraction(1, 2))
        mu = ProductMeasure.uniform(4)
        assert cube_boundary_measure(fam.realized, mu) == fam.analytic["boundary"]

    def test_analytic_matches_enumeration_biased(self):
        q = Fraction(1, 3)
        fam = threshold_family(5, q)
        mu = ProductMeasure.uniform(5, q)
        assert cube_expectation(fam.realized, mu) == fam.expectation
        for k in range(1, 6):
            assert cube_h_influence(fam.realized, mu, k, IND) == fam.analytic_influence(k, IND)

    def test_lift_consistent(self):
        fam = threshold_family(3, Fraction(3, 8))
        assert grid_expectation(fam.lifted) == fam.expectation

    def test_cap(self):
        with pytest.raises(ValueError):
            threshold_family(21, Fraction(1, 2))


class TestRandomGrid:
    def test_density_extremes(self):
        assert not random_grid(2, 4, 0.0, 1).cells.any()
        assert random_grid(2, 4, 1.0, 1).cells.all()

    def test_determinism(self):
        a = random_grid(3, (2, 3, 4), 0.5, 42)
        b = random_grid(3, (2, 3, 4), 0.5, 42)
        assert a == b

    def test_cap(self):
        with pytest.raises(ValueError):
            random_grid(2, 1 << 14, 0.5, 0)


class TestParseFamily:
    def test_designators(self):
        assert parse_family("corner:n=4,r=4").family == "corner"
        assert parse_family("tribes:n=4,r=2,q=1/2").family == "tribes"
        assert parse_family("threshold:n=6,q=1/3").family == "threshold"
        assert parse_family("padded:n=8,m=4,r=2,q=1/2").family == "padded_tribes"
        g = parse_family("random:n=2,r=4,density=0.5,seed=7")
        assert isinstance(g, GridFunction)

    def test_file_dispatch(self, tmp_path):
        gpath = tmp_path / "g.grid"
        gpath.write_text("n=1\nr=4\n3\n")
        assert isinstance(parse_family(f"file:{gpath}"), GridFunction)
        cpath = tmp_path / "f.tt"
        cpath.write_text("m=2\n7\n")
        assert isinstance(parse_family(f"file:{cpath}"), CubeFunction)

    def test_errors(self):
        with pytest.raises(ValueError):
            parse_family("corner")
        with pytest.raises(ValueError):
            parse_family("pyramid:n=4")


class TestEpsilonScaling:
    """Kernels with h(q) <= eps * Ent(q) scale the tribes influence by eps."""

    @pytest.mark.parametrize("n,r,q", [(8, 2, Fraction(1, 2)), (9, 3, Fraction(1, 3))])
    def test_variance_vs_entropy_chain(self, n, r, q):
        fam = tribes(n, r, q)
        eps = float(VAR(q)) / entropy(q)
        max_var = max(float(v) for v in fam.analytic_influences(VAR))
        max_ent = max(float(v) for v in fam.analytic_influences(ENT))
        assert max_var <= eps * max_ent + 1e-15
        # the influence is within a constant of 2 log2(n) / (e n Ent(q)) times h(q)
        bound = 2 * math.log2(n) / (math.e * n * entropy(q)) * float(VAR(q))
        assert max_var <= bound * 3.0
