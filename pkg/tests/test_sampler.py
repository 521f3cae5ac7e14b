"""Covariance-based Gaussian sampling and the stationary comparison process."""

import math

import numpy as np
import pytest

from oscharm.conditions import CoefficientSequence
from oscharm.dudley import dudley_distance
from oscharm.geometry import SpherePair
from oscharm.sampler import (
    StationarySpec,
    arc_grid,
    cholesky_with_jitter,
    draw_normals,
    field_covariance,
    gaussian_sup_test,
    sample_field,
    stationary_kernel,
    sup_norm_partial_sums,
)
from oscharm.special import eigenspace_dim, normalized_bessel_many
from oscharm.spectral import spectral_exact
from oscharm.geometry import hat_coords_general


def normal_cdf(x):
    return 0.5 * (1.0 + np.vectorize(math.erf)(x / math.sqrt(2.0)))


def ks_statistic(sample):
    s = np.sort(sample)
    n = len(s)
    cdf = normal_cdf(s / np.std(s))
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    return float(np.max(np.maximum(np.abs(cdf - ecdf_hi), np.abs(cdf - ecdf_lo))))


class TestFieldCovariance:
    def test_single_point_single_level_variance(self):
        # variance c(n)^2 e(x,x)/dim(E_n) ~ c^2/(2 pi n) at d = 2
        n = 300
        vals = np.zeros(n)
        vals[n - 1] = 2.0
        coeffs = CoefficientSequence.explicit(vals)
        pt = np.array([[1.0, 0.0]])
        cov = field_covariance(2, coeffs, pt, n)
        assert cov.shape == (1, 1)
        assert cov[0, 0] == pytest.approx(4.0 / (2.0 * math.pi * n), rel=0.15)
        exact = 4.0 * spectral_exact(2, n, hat_coords_general(pt[0], pt[0])) / eigenspace_dim(2, n)
        assert cov[0, 0] == pytest.approx(exact, rel=1e-12)

    def test_duplicate_points_rejected(self):
        pts = np.array([[1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(ValueError):
            field_covariance(2, CoefficientSequence.explicit([1.0]), pts, 1)

    def test_dudley_identity(self):
        # 2 (C_ii - C_ij) equals the truncated squared Dudley distance
        pts = arc_grid(2, 8)
        coeffs = CoefficientSequence.power_log(a=1.0, b=0.0, n0=1)
        cov = field_covariance(2, coeffs, pts, 128)
        for i, j in ((0, 3), (2, 7)):
            r = float(np.linalg.norm(pts[i] - pts[j]))
            dd = dudley_distance(2, coeffs, SpherePair(2, r), 128)
            lhs = cov[i, i] + cov[j, j] - 2.0 * cov[i, j]
            assert lhs == pytest.approx(dd.value**2, abs=1e-13)

    def test_symmetry_and_positive_diagonal(self):
        pts = arc_grid(3, 6)
        cov = field_covariance(3, CoefficientSequence.power_log(a=1.0), pts, 64)
        np.testing.assert_allclose(cov, cov.T, atol=1e-12)
        assert np.all(np.diag(cov) > 0)


class TestSampleField:
    def test_identity_covariance_variances(self):
        sample = sample_field(np.eye(4), 100_000, 11)
        var = np.var(sample.draws, axis=0)
        np.testing.assert_allclose(var, 1.0, atol=0.02)

    def test_empirical_covariance_converges(self):
        pts = arc_grid(2, 10)
        cov = field_covariance(2, CoefficientSequence.power_log(a=1.0), pts, 200)
        sample = sample_field(cov, 20_000, 7, points=pts)
        emp = sample.empirical_covariance()
        frob = np.linalg.norm(emp - cov) / np.linalg.norm(cov)
        assert frob <= 0.05

    def test_seed_reproducibility_and_order_independence(self):
        cov = np.eye(3)
        a = sample_field(cov, 50, 9)
        b = sample_field(cov, 50, 9)
        assert np.array_equal(a.draws, b.draws)
        # per-draw streams: generating draw 17 alone matches row 17
        row = draw_normals(9, 17, 3)
        assert np.array_equal(a.draws[17], row)  # identity factor keeps normals

    def test_marginals_gaussian(self):
        pts = arc_grid(2, 10)
        cov = field_covariance(2, CoefficientSequence.power_log(a=1.0), pts, 100)
        sample = sample_field(cov, 4000, 21)
        crit = 1.63 / math.sqrt(4000)  # 1% asymptotic critical value
        stats = [ks_statistic(sample.draws[:, j]) for j in range(10)]
        assert sum(s < crit for s in stats) >= 9

    def test_jitter_reported_for_near_singular(self):
        base = np.array([[1.0, 1.0], [1.0, 1.0]])
        chol, jitter = cholesky_with_jitter(base)
        assert jitter > 0
        assert np.allclose(chol @ chol.T, base, atol=1e-5)

    def test_singular_rejected(self):
        with pytest.raises(np.linalg.LinAlgError):
            cholesky_with_jitter(np.array([[1.0, 0.0], [0.0, -1.0]]))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            cholesky_with_jitter(np.array([[1.0, 0.5], [0.0, 1.0]]))


class TestStationaryKernel:
    SPEC = StationarySpec(
        weights=CoefficientSequence.explicit(0.5 ** np.arange(1, 41)), theta=0.5
    )

    def test_value_at_zero(self):
        total = float(np.sum(self.SPEC.weights.values))
        assert stationary_kernel(self.SPEC, 0.0) == pytest.approx(total, rel=1e-12)

    def test_difference_identity_and_band(self):
        r = 0.1
        k0 = stationary_kernel(self.SPEC, 0.0)
        kr = stationary_kernel(self.SPEC, r)
        ns = np.arange(1, 41)
        cs = 0.5**ns
        direct = float(np.sum(2.0 * cs * (1.0 - normalized_bessel_many(2, ns**0.5 * r))))
        assert 2.0 * (k0 - kr) == pytest.approx(direct, abs=1e-10)
        denom = float(np.sum(cs * np.minimum(1.0, ns**0.5 * r) ** 2))
        assert 0.4 <= 2.0 * (k0 - kr) / denom <= 3.0

    def test_band_across_radii(self):
        for r in (0.02, 0.3, 1.0, 2.0):
            k0 = stationary_kernel(self.SPEC, 0.0)
            kr = stationary_kernel(self.SPEC, r)
            ns = np.arange(1, 41)
            cs = 0.5**ns
            denom = float(np.sum(cs * np.minimum(1.0, ns**0.5 * r) ** 2))
            assert 0.4 <= 2.0 * (k0 - kr) / denom <= 3.0

    def test_single_term_small_r(self):
        spec = StationarySpec(weights=CoefficientSequence.explicit([1.0]), theta=1.0)
        for r in (0.01, 0.05):
            val = 2.0 * (stationary_kernel(spec, 0.0) - stationary_kernel(spec, r))
            assert val == pytest.approx(r * r / 2.0, rel=1e-3)

    def test_unreachable_truncation_rejected(self):
        spec = StationarySpec(weights=CoefficientSequence.power_log(a=1.5), theta=0.5)
        with pytest.raises(ValueError):
            stationary_kernel(spec, 0.3)


class TestGaussianSupMoment:
    def test_single_cell_half_normal(self):
        res = gaussian_sup_test(1, 1, [1.0], 100_000, 3)
        assert res.estimate == pytest.approx(math.sqrt(2.0 / math.pi), rel=0.02)

    def test_zero_rows(self):
        res = gaussian_sup_test(8, 4, np.zeros(8), 500, 1)
        assert res.estimate == 0.0

    def test_log_growth_slope(self):
        sizes = [4, 16, 64, 256, 1024]
        ests = [gaussian_sup_test(i, 32, np.ones(i), 3000, 5).estimate for i in sizes]
        slope = np.polyfit(np.log(sizes), np.array(ests) ** 2, 1)[0]
        assert 1.4 <= slope <= 2.6

    def test_ratio_below_bound_constant(self):
        for i in (4, 64, 1024):
            res = gaussian_sup_test(i, 32, np.ones(i), 2000, 9)
            assert res.ratio <= 3.0


class TestBlockSups:
    PTS = arc_grid(2, 10)

    def test_zero_weights(self):
        rows = sup_norm_partial_sums(
            2, CoefficientSequence.explicit(np.zeros(2048)), self.PTS, 3, 200, 4
        )
        assert all(r.mc_sup == 0.0 and r.theoretical_weight == 0.0 for r in rows)

    def test_single_block_positive(self):
        vals = np.zeros(255)
        vals[16:200] = 1.0 / np.arange(17.0, 201.0)
        rows = sup_norm_partial_sums(
            2, CoefficientSequence.explicit(vals), self.PTS, 3, 400, 4
        )
        assert rows[2].mc_sup > 0 and rows[2].theoretical_weight > 0
        assert rows[0].mc_sup == 0.0

    def test_qualitative_block_trend(self):
        conv = sup_norm_partial_sums(
            2, CoefficientSequence.power_log(a=0.0, b=1.5, n0=2), self.PTS, 3, 1500, 11
        )
        div = sup_norm_partial_sums(
            2, CoefficientSequence.power_log(a=0.0, b=0.75, n0=2), self.PTS, 3, 1500, 11
        )
        conv_sups = [r.mc_sup for r in conv]
        div_sups = [r.mc_sup for r in div]
        assert all(b < a for a, b in zip(conv_sups, conv_sups[1:]))
        assert not all(b < a for a, b in zip(div_sups, div_sups[1:]))

    def test_block_cap(self):
        with pytest.raises(ValueError):
            sup_norm_partial_sums(
                2, CoefficientSequence.explicit([1.0]), self.PTS, 5, 100, 1
            )
