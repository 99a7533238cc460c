"""Model and sampler contracts: unit norms, distributions, determinism."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rank1cross.model import (
    RankOneModel,
    SingularSpectrumSpec,
    build_independent_noise_model,
    build_ratio_model,
    cnorm,
    sample_haar_orthonormal,
    sample_sphere_vector,
)


class TestCnorm:
    def test_zero_matrix(self):
        assert cnorm(np.zeros((3, 4))) == 0.0

    def test_pinned_example(self):
        assert cnorm(np.array([[1.0, -3.0], [2.0, 0.0]])) == 3.0

    def test_matches_brute_force_scan(self):
        rng = np.random.default_rng(7)
        M = rng.standard_normal((13, 9))
        best = 0.0
        for i in range(13):
            for j in range(9):
                best = max(best, abs(M[i, j]))
        assert cnorm(M) == best

    def test_complex_entries(self):
        assert cnorm(np.array([[3 + 4j, 1.0]])) == pytest.approx(5.0, abs=1e-15)


class TestSphereSampler:
    def test_n1_real_is_sign(self):
        rng = np.random.default_rng(0)
        values = {float(sample_sphere_vector(1, "real", rng)[0]) for _ in range(64)}
        assert values == {-1.0, 1.0}

    @pytest.mark.parametrize("field", ["real", "complex"])
    @pytest.mark.parametrize("n", [1, 2, 17, 100])
    def test_unit_norm(self, field, n):
        rng = np.random.default_rng(42)
        v = sample_sphere_vector(n, field, rng)
        assert v.shape == (n,)
        assert abs(float(np.linalg.norm(v)) - 1.0) <= 1e-12

    def test_mean_square_first_coordinate(self):
        # E|v_1|^2 = 1/n by exchangeability of the coordinates
        rng = np.random.default_rng(2718)
        n, samples = 100, 100_000
        g = rng.standard_normal((samples, n))
        v1sq = g[:, 0] ** 2 / (g * g).sum(axis=1)
        se = v1sq.std(ddof=1) / math.sqrt(samples)
        assert abs(v1sq.mean() - 1.0 / n) <= 3.0 * se

    def test_coordinate_symmetry_ks(self):
        # |v_1| and |v_n| are identically distributed
        rng = np.random.default_rng(31415)
        n, samples = 37, 100_000
        g = rng.standard_normal((samples, n))
        v = np.abs(g) / np.sqrt((g * g).sum(axis=1, keepdims=True))
        result = stats.ks_2samp(v[:, 0], v[:, -1])
        assert result.pvalue > 0.01

    def test_invalid_dimension(self):
        with pytest.raises(ValueError, match=">= 1"):
            sample_sphere_vector(0, "real", np.random.default_rng(0))

    def test_deterministic(self):
        a = sample_sphere_vector(50, "complex", np.random.default_rng(99))
        b = sample_sphere_vector(50, "complex", np.random.default_rng(99))
        assert np.array_equal(a, b)


class TestHaarSampler:
    def test_n1_real_is_sign(self):
        rng = np.random.default_rng(3)
        values = {float(sample_haar_orthonormal(1, "real", rng)[0, 0]) for _ in range(64)}
        assert values == {-1.0, 1.0}

    @pytest.mark.parametrize("field", ["real", "complex"])
    @pytest.mark.parametrize("n", [1, 3, 20, 80])
    def test_orthonormality(self, field, n):
        rng = np.random.default_rng(11)
        Q = sample_haar_orthonormal(n, field, rng)
        err = np.abs(Q.conj().T @ Q - np.eye(n)).max()
        assert err <= 1e-10

    def test_first_entry_matches_sphere_sampler(self):
        # the first column of a real rotation-invariant matrix is sphere-uniform
        rng = np.random.default_rng(31415)
        n, samples = 50, 10_000
        q11 = np.array([abs(sample_haar_orthonormal(n, "real", rng)[0, 0]) ** 2 for _ in range(samples)])
        v1 = np.array([abs(sample_sphere_vector(n, "real", rng)[0]) ** 2 for _ in range(samples)])
        result = stats.ks_2samp(q11, v1)
        assert result.pvalue > 0.01

    def test_invalid_dimension(self):
        with pytest.raises(ValueError, match=">= 1"):
            sample_haar_orthonormal(0, "real", np.random.default_rng(0))


class TestRatioModel:
    def test_2x2_epsilon_is_inverse_ratio(self):
        model = build_ratio_model(SingularSpectrumSpec(ratio=10.0, m=2, n=2), np.random.default_rng(5))
        assert model.epsilon == pytest.approx(0.1, abs=1e-10)

    def test_delta_recomputed_from_noise(self):
        model = build_ratio_model(SingularSpectrumSpec(ratio=4.0, m=20, n=15), np.random.default_rng(6))
        assert model.delta == cnorm(model.E)

    def test_ratio_realized_across_seeds(self):
        for seed in range(1000):
            model = build_ratio_model(SingularSpectrumSpec(ratio=8.0, m=40, n=40), np.random.default_rng(seed))
            realized = model.sigma * model.u_inf * model.v_inf / model.delta
            assert abs(realized - 8.0) <= 8.0 * 1e-10
            assert abs(model.epsilon - 0.125) <= 1e-10

    @pytest.mark.parametrize("field", ["real", "complex"])
    def test_reassembles_to_A(self, field):
        model = build_ratio_model(SingularSpectrumSpec(ratio=16.0, m=30, n=25, field=field), np.random.default_rng(8))
        rebuilt = model.sigma * np.outer(model.u, np.conj(model.v)) + model.E
        np.testing.assert_allclose(rebuilt, model.A, rtol=1e-12, atol=0)

    def test_unit_singular_vectors(self):
        model = build_ratio_model(SingularSpectrumSpec(ratio=3.0, m=10, n=12), np.random.default_rng(9))
        assert abs(np.linalg.norm(model.u) - 1.0) <= 1e-12
        assert abs(np.linalg.norm(model.v) - 1.0) <= 1e-12

    def test_too_small_dimensions(self):
        with pytest.raises(ValueError, match="min\\(m, n\\)"):
            build_ratio_model(SingularSpectrumSpec(ratio=2.0, m=1, n=5), np.random.default_rng(0))

    def test_invalid_ratio(self):
        with pytest.raises(ValueError, match="positive"):
            SingularSpectrumSpec(ratio=0.0, m=4, n=4)

    def test_deterministic(self):
        a = build_ratio_model(SingularSpectrumSpec(ratio=8.0, m=25, n=25), np.random.default_rng(123))
        b = build_ratio_model(SingularSpectrumSpec(ratio=8.0, m=25, n=25), np.random.default_rng(123))
        assert np.array_equal(a.A, b.A)
        assert a.sigma == b.sigma

    def test_arrays_frozen(self):
        model = build_ratio_model(SingularSpectrumSpec(ratio=8.0, m=5, n=5), np.random.default_rng(1))
        with pytest.raises(ValueError):
            model.A[0, 0] = 0.0


class TestIndependentNoiseModel:
    def test_magnitudes_within_request(self):
        model = build_independent_noise_model(30, 30, sigma=5.0, delta=0.7, rng=np.random.default_rng(10))
        assert np.abs(model.E).max() <= 0.7
        assert model.delta == cnorm(model.E)

    def test_mean_magnitude(self):
        # uniform magnitudes on [0, d] have mean d/2
        model = build_independent_noise_model(200, 500, sigma=5.0, delta=0.8, rng=np.random.default_rng(11))
        mags = np.abs(model.E).ravel()
        se = mags.std(ddof=1) / math.sqrt(mags.size)
        assert abs(mags.mean() - 0.4) <= 3.0 * se

    def test_sign_balance(self):
        model = build_independent_noise_model(200, 500, sigma=5.0, delta=1.0, rng=np.random.default_rng(12))
        frac_negative = float((model.E < 0).mean())
        se = math.sqrt(0.25 / model.E.size)
        assert abs(frac_negative - 0.5) <= 3.0 * se

    def test_reassembles_to_A(self):
        model = build_independent_noise_model(12, 18, sigma=3.0, delta=0.5, rng=np.random.default_rng(13))
        rebuilt = model.sigma * np.outer(model.u, model.v) + model.E
        np.testing.assert_allclose(rebuilt, model.A, rtol=1e-12, atol=0)

    def test_invalid_delta(self):
        with pytest.raises(ValueError, match="delta"):
            build_independent_noise_model(5, 5, sigma=1.0, delta=0.0, rng=np.random.default_rng(0))


class TestRankOneModelValidation:
    def test_rejects_non_unit_u(self):
        E = np.zeros((2, 2))
        v = np.array([1.0, 0.0])
        u = np.array([2.0, 0.0])
        with pytest.raises(ValueError, match="unit vector"):
            RankOneModel(sigma=1.0, u=u, v=v, E=E, A=np.outer(u, v), delta=0.0, epsilon=0.0)

    def test_rejects_wrong_delta(self):
        u = np.array([1.0, 0.0])
        v = np.array([0.0, 1.0])
        E = np.full((2, 2), 0.25)
        with pytest.raises(ValueError, match="delta"):
            RankOneModel(sigma=1.0, u=u, v=v, E=E, A=np.outer(u, v) + E, delta=0.1, epsilon=0.1)

    def test_rejects_mixed_fields(self):
        u = np.array([1.0, 0.0])
        v = np.array([0.0 + 0j, 1.0 + 0j])
        E = np.zeros((2, 2))
        with pytest.raises(ValueError, match="mixed"):
            RankOneModel(sigma=1.0, u=u, v=v, E=E, A=np.outer(u, np.conj(v)), delta=0.0, epsilon=0.0)


@given(
    st.lists(
        st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=4, max_size=4),
        min_size=3,
        max_size=3,
    )
)
@settings(max_examples=200, deadline=None)
def test_cnorm_is_max_abs_entry(rows):
    M = np.array(rows)
    assert cnorm(M) == max(abs(x) for row in rows for x in row)
