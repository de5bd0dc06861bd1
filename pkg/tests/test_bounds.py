import math

import numpy as np
import pytest

from renyi.bounds import (
    mixture_lower_bound,
    mixture_upper_bound,
    shannon_limit_check,
    shannon_mixture_bounds,
    verify_mixture_bounds,
)
from renyi.errors import InputError
from renyi.families import CellFamily
from renyi.measure import AtomSpace, DiscreteMeasure, MixtureSpec
from renyi.search import random_instance


def singletons(n):
    return CellFamily(tuple(frozenset({i}) for i in range(n)))


class TestLower:
    def test_zero_entropies(self):
        assert mixture_lower_bound([0, 0], [0.5, 0.5], 2) == 0.0

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 2, 4])
    @pytest.mark.parametrize("coeffs", [[0.5, 0.5], [0.1, 0.9], [0.2, 0.3, 0.5]])
    def test_equal_entropies(self, alpha, coeffs):
        h = 2.75
        assert mixture_lower_bound([h] * len(coeffs), coeffs, alpha) == pytest.approx(h, abs=1e-12)

    def test_one_two(self):
        # g_2(1) = 1/2, g_2(2) = 1/4, mean 3/8, g_2^-1(3/8) = log2(8/3)
        val = mixture_lower_bound([1, 2], [0.5, 0.5], 2)
        assert val == pytest.approx(math.log2(8 / 3), abs=1e-12)
        assert 1 <= val <= 2


class TestUpper:
    def test_zero_entropies(self):
        assert mixture_upper_bound([0, 0], [0.5, 0.5], 2) == pytest.approx(1.0, abs=1e-15)

    def test_single_component(self):
        assert mixture_upper_bound([1.7], [1.0], 0.5) == pytest.approx(1.7, abs=1e-12)

    def test_unequal_coefficients(self):
        expected = 2 * math.log2(math.sqrt(0.3) + math.sqrt(0.7))
        assert mixture_upper_bound([0, 0], [0.3, 0.7], 0.5) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.938485, abs=1e-6)


def test_infinite_short_circuit():
    assert mixture_lower_bound([1.0, math.inf], [0.5, 0.5], 2) == math.inf
    assert mixture_upper_bound([1.0, math.inf], [0.5, 0.5], 0.5) == math.inf
    # a component with zero weight does not enter the mixture
    assert mixture_upper_bound([1.0, math.inf], [1.0, 0.0], 2) == pytest.approx(1.0)


def test_simplex_violation():
    with pytest.raises(InputError):
        mixture_lower_bound([0, 0], [0.5, 0.6], 2)
    with pytest.raises(InputError):
        mixture_upper_bound([0, 0], [1.5, -0.5], 2)


def test_lower_below_upper(rng):
    for _ in range(500):
        n = int(rng.integers(1, 5))
        coeffs = list(rng.dirichlet(np.ones(n)))
        hs = list(rng.uniform(0, 10, n))
        for alpha in (0.1, 0.5, 0.9, 1.1, 2, 6):
            assert mixture_lower_bound(hs, coeffs, alpha) <= mixture_upper_bound(hs, coeffs, alpha) + 1e-12


def example_43(a1):
    space = AtomSpace.range(2)
    return MixtureSpec.of((a1, DiscreteMeasure.dirac(space, 0)), (1 - a1, DiscreteMeasure.dirac(space, 1)))


class TestVerify:
    @pytest.mark.parametrize("alpha", [0.5, 2, 3])
    def test_disjoint_diracs_attain_upper(self, alpha):
        r = verify_mixture_bounds(example_43(0.3), singletons(2), alpha)
        assert r.lower == 0.0
        assert r.actual == pytest.approx(r.upper, abs=1e-12)
        assert r.holds and r.certified

    @pytest.mark.parametrize("alpha", [0.5, 2])
    def test_identical_components_attain_lower(self, alpha):
        space = AtomSpace.range(3)
        mu = DiscreteMeasure(space, [0.5, 0.3, 0.2])
        Q = CellFamily(({0, 1}, {1, 2}))
        r = verify_mixture_bounds(MixtureSpec.of((0.4, mu), (0.6, mu)), Q, alpha)
        assert r.actual == pytest.approx(r.lower, abs=1e-12)
        assert r.actual == pytest.approx(r.components[0], abs=1e-12)

    def test_random_six_atom_instances(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            _, Q = random_instance(rng, 6, 3)
            space = AtomSpace.range(6)
            comps = [DiscreteMeasure(space, rng.dirichlet(np.ones(6))) for _ in range(2)]
            spec = MixtureSpec(tuple(rng.dirichlet(np.ones(2))), tuple(comps))
            for alpha in (0.5, 2):
                assert verify_mixture_bounds(spec, Q, alpha).holds

    def test_infinite_component(self):
        space = AtomSpace.range(2)
        spec = MixtureSpec.of((0.5, DiscreteMeasure.dirac(space, 0)), (0.5, DiscreteMeasure.dirac(space, 1)))
        r = verify_mixture_bounds(spec, CellFamily(({0},)), 2)
        assert r.actual == math.inf and r.upper == math.inf and r.holds


class TestShannonLimit:
    def test_limits(self):
        lo, hi = shannon_mixture_bounds([1, 2], [0.5, 0.5])
        assert (lo, hi) == (1.5, 2.5)
        (_, l, u), = shannon_limit_check([1, 2], [0.5, 0.5], [1.0001])
        assert abs(l - 1.5) <= 1e-3 and abs(u - 2.5) <= 1e-3

    def test_converges_from_both_sides(self):
        rows = shannon_limit_check([1, 2], [0.5, 0.5], [0.9, 0.99, 0.999, 1.001, 1.01, 1.1])
        err = [max(abs(l - 1.5), abs(u - 2.5)) for _, l, u in rows]
        assert err[0] > err[1] > err[2] and err[5] > err[4] > err[3]

    def test_single_component_gap_closes(self):
        for _, l, u in shannon_limit_check([3.0], [1.0], [0.2, 0.9, 1.5, 4]):
            assert u - l == pytest.approx(0.0, abs=1e-12)

    def test_rejects_alpha_one(self):
        with pytest.raises(InputError):
            shannon_limit_check([1, 2], [0.5, 0.5], [0.9, 1.0])


def test_rounding_negative_entropy_is_accepted():
    assert mixture_lower_bound([-1e-16, 1.0], [0.5, 0.5], 2) >= 0.0
    with pytest.raises(InputError):
        mixture_lower_bound([-1e-6, 1.0], [0.5, 0.5], 2)
