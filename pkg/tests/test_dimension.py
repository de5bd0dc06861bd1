import math

import numpy as np
import pytest

from renyi.core import partition_entropy
from renyi.dimension import (
    DeltaLadder,
    IfsSpec,
    OverlapWarning,
    cantor_measure,
    entropy_at_scale,
    estimate_dimension,
    generate_ifs_measure,
    mixture_dimension_check,
    uniform_dyadic,
)
from renyi.errors import EstimationError, InputError
from renyi.families import grid_family
from renyi.measure import AtomSpace, DiscreteMeasure, MixtureSpec, disjoint_union

CANTOR_DIM = math.log(2) / math.log(3)


def uniform_triadic(depth):
    return generate_ifs_measure(IfsSpec((1 / 3,) * 3, ((0.0,), (1 / 3,), (2 / 3,)), (1 / 3,) * 3, depth))


class TestEntropyAtScale:
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 2, 5])
    def test_uniform_dyadic(self, alpha):
        for k in (1, 4, 9):
            assert entropy_at_scale(uniform_dyadic(k), 2.0 ** -k, alpha) == pytest.approx(k, abs=1e-9)

    def test_single_atom(self):
        mu = DiscreteMeasure(AtomSpace.range(1, [[0.3]]), [1.0])
        for delta in (1.0, 0.1, 1e-6):
            assert entropy_at_scale(mu, delta, 2) == 0.0

    @pytest.mark.parametrize("alpha", [0.5, 2])
    def test_cantor(self, alpha):
        for k in (2, 5, 8):
            assert entropy_at_scale(cantor_measure(k), 3.0 ** -k, alpha) == pytest.approx(k, abs=1e-9)

    def test_matches_grid_family_partition(self, rng):
        space = AtomSpace.range(200, rng.random((200, 2)))
        mu = DiscreteMeasure(space, rng.dirichlet(np.ones(200)))
        for delta in (0.5, 0.2, 0.07):
            for alpha in (0.5, 3):
                direct = partition_entropy(mu, grid_family(space, delta), alpha)
                assert entropy_at_scale(mu, delta, alpha) == pytest.approx(direct, abs=1e-12)

    def test_balls(self):
        space = AtomSpace.range(4, [[0.0], [0.1], [0.5], [0.6]])
        mu = DiscreteMeasure.uniform(space)
        assert entropy_at_scale(mu, 0.15, 2, "balls") == pytest.approx(1.0)
        assert entropy_at_scale(mu, 0.01, 2, "balls") == pytest.approx(2.0)

    def test_bad_delta(self):
        with pytest.raises(InputError):
            entropy_at_scale(uniform_dyadic(2), 0.0, 2)

    def test_nonincreasing_in_alpha(self, rng):
        space = AtomSpace.range(300, rng.random((300, 1)))
        mu = DiscreteMeasure(space, rng.dirichlet(np.full(300, 0.3)))
        alphas = [0.2, 0.5, 0.8, 1.5, 2, 4]
        for delta in (0.3, 0.05, 0.01):
            vals = [entropy_at_scale(mu, delta, a) for a in alphas]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


class TestLadder:
    def test_parse(self):
        lad = DeltaLadder.parse("triadic:4..6")
        assert lad.scales == pytest.approx((3.0 ** -4, 3.0 ** -5, 3.0 ** -6))
        assert DeltaLadder.parse("0.5,0.25,0.125").scales == (0.5, 0.25, 0.125)
        assert DeltaLadder.parse("base5:1..3").scales == pytest.approx((0.2, 0.04, 0.008))

    @pytest.mark.parametrize("bad", [(0.5, 0.25), (0.5, 0.5, 0.25), (0.1, 0.2, 0.3), (1.0, 0.5, -0.1)])
    def test_invalid(self, bad):
        with pytest.raises(InputError):
            DeltaLadder(bad)

    def test_unparsable(self):
        with pytest.raises(InputError):
            DeltaLadder.parse("dyadic:four")


class TestEstimate:
    def test_uniform_dyadic(self):
        est = estimate_dimension(uniform_dyadic(12), DeltaLadder.geometric(2, 4, 12), 0.5)
        assert est.slope == pytest.approx(1.0, abs=0.01)
        assert est.residual < 1e-9

    @pytest.mark.parametrize("alpha", [0.5, 2])
    def test_cantor(self, alpha):
        est = estimate_dimension(cantor_measure(12), DeltaLadder.geometric(3, 4, 12), alpha)
        assert est.slope == pytest.approx(CANTOR_DIM, abs=0.01)
        assert est.residual < 1e-9
        assert est.lower_proxy <= est.slope <= est.upper_proxy

    def test_point_mass(self):
        mu = DiscreteMeasure(AtomSpace.range(1, [[0.5]]), [1.0])
        assert estimate_dimension(mu, DeltaLadder.geometric(2, 1, 6), 2).slope == pytest.approx(0.0, abs=1e-12)

    def test_slope_between_proxies(self, rng):
        space = AtomSpace.range(500, rng.random((500, 1)) ** 2)
        mu = DiscreteMeasure(space, rng.dirichlet(np.ones(500)))
        est = estimate_dimension(mu, DeltaLadder.geometric(2, 1, 7), 0.5)
        assert est.lower_proxy - 1e-12 <= est.slope <= est.upper_proxy + 1e-12
        assert est.residual >= 0

    def test_too_few_points(self):
        mu = DiscreteMeasure(AtomSpace.range(1, [[0.5]]), [1.0])
        lad = DeltaLadder((0.5, 0.25, 0.125), "balls")
        est = estimate_dimension(mu, lad, 2)
        assert est.slope == pytest.approx(0.0)
        with pytest.raises(EstimationError):
            estimate_dimension(mu, lad, 2, centers=[[5.0]])


class TestIfs:
    def test_cantor_depth2(self):
        mu = generate_ifs_measure(IfsSpec((1 / 3, 1 / 3), ((0.0,), (2 / 3,)), (0.5, 0.5), 2))
        assert len(mu.space) == 4
        np.testing.assert_allclose(mu.weights, 0.25)
        np.testing.assert_allclose(mu.space.coords[:, 0], [1 / 18, 5 / 18, 13 / 18, 17 / 18])

    def test_single_map(self):
        mu = generate_ifs_measure(IfsSpec((0.5,), ((0.0,),), (1.0,), 5))
        assert len(mu.space) == 1 and mu.weights[0] == 1.0
        assert mu.space.coords[0, 0] == pytest.approx(0.5 / 32)

    def test_degenerate_probs(self):
        mu = generate_ifs_measure(IfsSpec((0.5, 0.5), ((0.0,), (0.5,)), (1.0, 0.0), 4))
        assert len(mu.space) == 16
        assert mu.weights[0] == 1.0 and mu.weights[1:].sum() == 0.0

    def test_product_weights(self):
        mu = generate_ifs_measure(IfsSpec((0.5, 0.5), ((0.0,), (0.5,)), (0.25, 0.75), 3))
        # word order: first symbol most significant
        expected = [0.25 ** (3 - bin(i).count("1")) * 0.75 ** bin(i).count("1") for i in range(8)]
        np.testing.assert_allclose(mu.weights, expected)
        assert np.all(np.diff(mu.space.coords[:, 0]) > 0)

    def test_overlap_flagged(self):
        with pytest.warns(OverlapWarning):
            generate_ifs_measure(IfsSpec((0.6, 0.6), ((0.0,), (0.4,)), (0.5, 0.5), 2))

    def test_two_dimensional(self):
        spec = IfsSpec((0.5,) * 3, ((0.0, 0.0), (0.5, 0.0), (0.0, 0.5)), (1 / 3,) * 3, 6)
        est = estimate_dimension(generate_ifs_measure(spec), DeltaLadder.geometric(2, 2, 6), 2)
        assert est.slope == pytest.approx(math.log2(3), abs=1e-9)

    def test_invalid(self):
        with pytest.raises(InputError):
            IfsSpec((1.2,), ((0.0,),), (1.0,), 2)
        with pytest.raises(InputError):
            IfsSpec((0.5, 0.5), ((0.0,), (0.5,)), (0.5, 0.6), 2)
        with pytest.raises(InputError):
            IfsSpec((0.5,), ((0.0,),), (1.0,), 0)

    def test_from_json(self):
        spec = IfsSpec.from_json({"maps": [{"ratio": 0.5, "offset": [0]}, {"ratio": 0.5, "offset": [0.5]}],
                                  "probs": [0.5, 0.5], "depth": 3})
        assert len(generate_ifs_measure(spec).space) == 8


def _cantor_uniform(depth, a=0.5):
    c, u = disjoint_union([cantor_measure(depth), uniform_triadic(depth)])
    return MixtureSpec.of((a, c), (1 - a, u))


class TestMixtureDimension:
    def test_identical_components(self):
        c = cantor_measure(8)
        lad = DeltaLadder.geometric(3, 3, 8)
        for alpha in (0.5, 2):
            r = mixture_dimension_check(MixtureSpec.of((0.3, c), (0.7, c)), lad, alpha)
            assert r.mixture.slope == pytest.approx(r.components[0].slope, abs=1e-12)
            assert r.passed

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 2, 4])
    def test_scale_sandwich(self, alpha):
        r = mixture_dimension_check(_cantor_uniform(7), DeltaLadder.geometric(3, 2, 7), alpha)
        assert r.sandwich_ok
        assert r.rule == ("max" if alpha < 1 else "min")

    def test_closed_form_matches_grid_entropy(self):
        # triadic grid, level k: Cantor occupies 2**k of the 3**k cells
        def closed_form(k, alpha):
            hit = 0.5 * 3.0 ** -k + 0.5 * 2.0 ** -k
            miss = 0.5 * 3.0 ** -k
            s = 2 ** k * hit ** alpha + (3 ** k - 2 ** k) * miss ** alpha
            return math.log2(s) / (1 - alpha)

        spec = _cantor_uniform(7)
        from renyi.measure import mix
        mu = mix(spec)
        for k in range(1, 8):
            for alpha in (0.5, 2):
                assert entropy_at_scale(mu, 3.0 ** -k, alpha) == pytest.approx(closed_form(k, alpha), abs=1e-9)

        # finite-depth bias of the fitted slope shrinks towards the max/min rule
        def fitted(depth, alpha):
            ks = np.arange(math.ceil(depth / 3), depth + 1)
            return np.polyfit(ks * math.log2(3), [closed_form(k, alpha) for k in ks], 1)[0]

        errs_half = [abs(fitted(d, 0.5) - 1.0) for d in (12, 24, 36)]
        errs_two = [abs(fitted(d, 2) - CANTOR_DIM) for d in (12, 24, 36)]
        assert errs_half[0] > errs_half[1] > errs_half[2] and errs_half[2] < 0.02
        assert errs_two[0] > errs_two[1] > errs_two[2] and errs_two[2] < 0.02
