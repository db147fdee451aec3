import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbnbench.rbm import (
    EXACT_ENUM_LIMIT,
    ModelExpectations,
    RbmParams,
    SizeGuardError,
    energy,
    exact_expectations,
    hidden_conditional,
    log_likelihood,
    log_partition_exact,
    visible_conditional,
)

from oracles import (
    all_states,
    brute_conditional_h,
    brute_conditional_v,
    brute_energy,
    brute_joint,
    brute_log_likelihood,
    brute_log_partition,
    brute_moments,
    p1_params,
)

# fixture values frozen from tests/oracles.py before the library was built
P1_VH = np.array([[0.5269713826378014, 0.21295771370398997],
                  [0.2998720934522966, 0.19577486423824098]])
P1_V = np.array([0.6779512115715781, 0.42548958667964315])
P1_H = np.array([0.7080196436310023, 0.39154972847648195])
P1_LOG_Z = 3.24173792209848


def random_params(n, m, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    return RbmParams(
        W=rng.uniform(-scale, scale, (n, m)),
        b=rng.uniform(-scale, scale, n),
        c=rng.uniform(-scale, scale, m),
    )


class TestParams:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            RbmParams(W=np.zeros((2, 3)), b=np.zeros(3), c=np.zeros(3))
        with pytest.raises(ValueError):
            RbmParams(W=np.zeros((2, 3)), b=np.zeros(2), c=np.zeros(2))

    def test_rejects_nonfinite(self):
        W = np.zeros((2, 2))
        W[0, 0] = np.inf
        with pytest.raises(ValueError):
            RbmParams(W=W, b=np.zeros(2), c=np.zeros(2))

    def test_arrays_are_locked(self):
        p = RbmParams.zeros(2, 3)
        with pytest.raises(ValueError):
            p.W[0, 0] = 1.0

    def test_expectations_range_check(self):
        with pytest.raises(ValueError):
            ModelExpectations(vh=np.full((1, 1), 1.5), v=[0.5], h=[0.5])


class TestEnergy:
    def test_zero_params_zero_energy(self):
        p = RbmParams.zeros(3, 2)
        assert energy(np.ones(3), np.ones(2), p) == 0.0

    def test_direct_substitution(self):
        p = RbmParams(W=[[3.0]], b=[1.0], c=[2.0])
        assert energy([1.0], [1.0], p) == -6.0

    def test_dimension_mismatch(self):
        p = RbmParams.zeros(3, 2)
        with pytest.raises(ValueError):
            energy(np.ones(2), np.ones(2), p)

    def test_gibbs_probabilities_from_energy(self):
        # exp(-E)/Z reproduces the enumerated joint for every state
        p = random_params(3, 2, seed=7)
        vs, hs, probs = brute_joint(p.W, p.b, p.c)
        log_z = log_partition_exact(p)
        for a, v in enumerate(vs):
            for bb, h in enumerate(hs):
                got = np.exp(-energy(v, h, p) - log_z)
                assert got == pytest.approx(probs[a, bb], rel=1e-10)

    def test_matches_brute_energy(self):
        p = random_params(4, 3, seed=3)
        rng = np.random.default_rng(0)
        for _ in range(20):
            v = rng.integers(0, 2, 4).astype(float)
            h = rng.integers(0, 2, 3).astype(float)
            assert energy(v, h, p) == pytest.approx(brute_energy(v, h, p.W, p.b, p.c))


class TestConditionals:
    def test_zero_params_give_half(self):
        p = RbmParams.zeros(4, 3)
        np.testing.assert_allclose(hidden_conditional(p, np.ones(4) * 0.3), 0.5)
        np.testing.assert_allclose(visible_conditional(p, np.zeros(3)), 0.5)

    def test_saturation(self):
        p = RbmParams(W=np.zeros((2, 2)), b=[50.0, 0.0], c=[-50.0, 0.0])
        assert hidden_conditional(p, np.zeros(2))[0] < 1e-20
        assert 1.0 - visible_conditional(p, np.zeros(2))[0] < 1e-20

    def test_against_enumeration(self):
        p = random_params(4, 3, seed=11)
        rng = np.random.default_rng(1)
        for _ in range(5):
            v = rng.integers(0, 2, 4).astype(float)
            h = rng.integers(0, 2, 3).astype(float)
            np.testing.assert_allclose(
                hidden_conditional(p, v), brute_conditional_h(p.W, p.b, p.c, v), rtol=1e-10)
            np.testing.assert_allclose(
                visible_conditional(p, h), brute_conditional_v(p.W, p.b, p.c, h), rtol=1e-10)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_strictly_inside_unit_interval(self, seed):
        # holds whenever the pre-activation stays below float64 sigmoid
        # saturation (~36.7); scale 8 with 3 inputs keeps |field| <= 32
        p = random_params(3, 4, seed=seed, scale=8.0)
        rng = np.random.default_rng(seed)
        v = rng.uniform(0, 1, 3)
        q = hidden_conditional(p, v)
        assert np.all(q > 0.0) and np.all(q < 1.0)


class TestLogPartition:
    def test_zero_2x2_is_log16(self):
        assert log_partition_exact(RbmParams.zeros(2, 2)) == pytest.approx(np.log(16), abs=1e-12)

    def test_1x1_ln2_is_log5(self):
        p = RbmParams(W=[[np.log(2)]], b=[0.0], c=[0.0])
        assert log_partition_exact(p) == pytest.approx(np.log(5), abs=1e-12)

    def test_against_brute_force(self):
        for seed in range(5):
            p = random_params(4, 3, seed=seed)
            want = brute_log_partition(p.W, p.b, p.c)
            assert log_partition_exact(p) == pytest.approx(want, rel=1e-12)

    def test_both_enumeration_sides(self):
        # wide RBM enumerates the visible layer instead
        p = random_params(3, 6, seed=9)
        want = brute_log_partition(p.W, p.b, p.c)
        assert log_partition_exact(p) == pytest.approx(want, rel=1e-12)

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            log_partition_exact(RbmParams.zeros(EXACT_ENUM_LIMIT + 1, EXACT_ENUM_LIMIT + 1))


class TestExactExpectations:
    def test_uniform_case(self):
        e = exact_expectations(RbmParams.zeros(3, 2))
        np.testing.assert_allclose(e.v, 0.5)
        np.testing.assert_allclose(e.h, 0.5)
        np.testing.assert_allclose(e.vh, 0.25)

    def test_pinned_unit(self):
        p = RbmParams(W=np.zeros((2, 2)), b=[-50.0, 0.0], c=np.zeros(2))
        e = exact_expectations(p)
        assert e.v[0] < 1e-20
        assert np.all(e.vh[0] < 1e-20)

    def test_p1_fixture(self):
        W, b, c = p1_params()
        e = exact_expectations(RbmParams(W=W, b=b, c=c))
        np.testing.assert_allclose(e.vh, P1_VH, atol=1e-12)
        np.testing.assert_allclose(e.v, P1_V, atol=1e-12)
        np.testing.assert_allclose(e.h, P1_H, atol=1e-12)
        assert log_partition_exact(RbmParams(W=W, b=b, c=c)) == pytest.approx(P1_LOG_Z, abs=1e-12)

    def test_against_brute_moments(self):
        for seed, (n, m) in ((0, (4, 3)), (1, (3, 5))):
            p = random_params(n, m, seed=seed)
            vh, v, h = brute_moments(p.W, p.b, p.c)
            e = exact_expectations(p)
            np.testing.assert_allclose(e.vh, vh, atol=1e-12)
            np.testing.assert_allclose(e.v, v, atol=1e-12)
            np.testing.assert_allclose(e.h, h, atol=1e-12)

    def test_marginal_consistency_vs_enumeration(self):
        # <v_i> from the joint enumeration equals the library's marginal
        p = random_params(4, 3, seed=21)
        vs, hs, probs = brute_joint(p.W, p.b, p.c)
        v_marg = probs.sum(axis=1) @ vs
        e = exact_expectations(p)
        np.testing.assert_allclose(e.v, v_marg, atol=1e-12)


class TestLogLikelihood:
    def test_uniform_model(self):
        p = RbmParams.zeros(1, 1)
        data = [[1.0], [0.0], [1.0]]
        assert log_likelihood(p, data) == pytest.approx(-np.log(2), abs=1e-12)

    def test_saturated_mode_approaches_zero(self):
        p = RbmParams(W=[[0.0]], b=[50.0], c=[0.0])
        assert abs(log_likelihood(p, [[1.0]])) < 1e-20

    def test_against_brute_force(self):
        p = random_params(4, 3, seed=17)
        rng = np.random.default_rng(5)
        data = rng.integers(0, 2, (10, 4)).astype(float)
        want = brute_log_likelihood(p.W, p.b, p.c, data)
        assert log_likelihood(p, data) == pytest.approx(want, rel=1e-12)
