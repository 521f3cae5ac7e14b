"""Oscillatory integrals, Euler-Maclaurin comparison, exponent fits."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import jv

from oscharm.special import normalized_bessel
from oscharm.verify import (
    ExponentFit,
    contraction_factor,
    envelope_fit,
    euler_maclaurin_check,
    fit_exponent,
    j0_band,
    osc_integral,
    osc_integral_many,
    prop14_suite,
)


class TestExponentFit:
    def test_recovers_synthetic_slope(self):
        rng = np.random.default_rng(0)
        x = np.geomspace(1, 1000, 40)
        y = 3.0 * x**-1.5 * (1.0 + 0.01 * rng.uniform(-1, 1, 40))
        fit = fit_exponent(x, y)
        assert fit.slope == pytest.approx(-1.5, abs=0.05)
        assert fit.sample_count == 40
        assert math.isfinite(fit.residual_rms)

    def test_envelope_ignores_zeros(self):
        x = np.linspace(1, 64, 400)
        y = np.abs(np.cos(3 * x)) / x  # zeros corrupt a naive fit
        fit = envelope_fit(x, y)
        assert fit.slope == pytest.approx(-1.0, abs=0.1)

    def test_requires_enough_samples(self):
        with pytest.raises(ValueError):
            fit_exponent([1, 2, 3], [1, 1, 1])


class TestOscIntegral:
    @pytest.mark.parametrize("alpha", [0.5, 3.0, 17.0, 111.0])
    def test_elementary_case(self, alpha):
        assert osc_integral(alpha, 0.0) == pytest.approx(
            2.0 * math.sin(alpha) / alpha, abs=1e-10
        )

    @pytest.mark.parametrize("beta", [-0.75, -0.5, 0.0, 0.5, 1.5, 3.0])
    def test_static_case_beta_function(self, beta):
        ref = math.sqrt(math.pi) * math.gamma(beta + 1.0) / math.gamma(beta + 1.5)
        assert osc_integral(0.0, beta) == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("beta", [-0.75, -0.6, -0.5, 0.5, 2.5])
    def test_bessel_oracle(self, beta):
        # int_{-1}^{1} cos(at)(1-t^2)^b dt = sqrt(pi) G(b+1) (2/a)^{b+1/2} J_{b+1/2}(a)
        for alpha in (0.7, 6.0, 40.0):
            ref = (
                math.sqrt(math.pi)
                * math.gamma(beta + 1.0)
                * (2.0 / alpha) ** (beta + 0.5)
                * jv(beta + 0.5, alpha)
            )
            tol = 1e-10 if beta >= -0.5 else 1e-7
            assert osc_integral(alpha, beta) == pytest.approx(ref, abs=tol)

    def test_matches_normalized_bessel_route(self):
        # through the half-integer order: value = sqrt(pi) G((d-1)/2) J~(alpha)
        for d in (2, 3, 5):
            beta = (d - 3) / 2.0
            for alpha in (0.9, 11.0):
                ref = math.sqrt(math.pi) * math.gamma((d - 1) / 2.0) * normalized_bessel(d, alpha)
                assert osc_integral(alpha, beta) == pytest.approx(ref, abs=1e-9)

    def test_decay_envelope_slopes(self):
        for beta in (0.5, 1.5):
            centers, maxima = [], []
            lo = 10.0
            while lo < 320.0:
                hi = 2.0 * lo
                grid = np.arange(lo, hi, 0.25)
                maxima.append(float(np.max(np.abs(osc_integral_many(grid, beta)))))
                centers.append(math.sqrt(lo * hi))
                lo = hi
            fit = fit_exponent(np.array(centers), np.array(maxima))
            assert fit.slope == pytest.approx(-(1.0 + beta), abs=0.15)

    def test_domain(self):
        with pytest.raises(ValueError):
            osc_integral(1.0, -1.0)
        with pytest.raises(ValueError):
            osc_integral(-1.0, 0.0)


class TestContraction:
    def test_below_one_on_grid(self):
        for alpha0 in (0.5, 1.0, 2.0):
            for beta in (-0.5, 0.0, 0.5, 1.5):
                assert contraction_factor(alpha0, beta) < 1.0

    def test_vanishes_for_large_alpha0(self):
        assert contraction_factor(300.0, 0.5) < 1e-2

    def test_half_integer_orders_used_downstream(self):
        # the factors eps(2 sqrt(2) c, (d-3)/2) entering the off-diagonal
        # contraction argument, reported per dimension
        vals = {d: contraction_factor(2.0 * math.sqrt(2.0), (d - 3) / 2.0) for d in (2, 3, 4, 5)}
        assert all(0.0 < v < 1.0 for v in vals.values())

    def test_domain(self):
        with pytest.raises(ValueError):
            contraction_factor(0.0, 0.5)


def rational_diagonal_sum_bracket(n, digits=30):
    """Enclosure of sum_{k+2l=n, k,l>=1} k^{-1/2} in exact rational arithmetic."""
    scale = 10**digits
    lo = Fraction(0)
    hi = Fraction(0)
    for ell in range(1, (n - 1) // 2 + 1):
        k = n - 2 * ell
        root_lo = math.isqrt(k * scale * scale)  # floor(sqrt(k) * 10^d)
        lo += Fraction(scale, root_lo + 1)
        hi += Fraction(scale, root_lo)
    return lo, hi


class TestEulerMaclaurin:
    def test_rational_spot_check(self):
        res = euler_maclaurin_check(64, 0.0, 0.0, kind="one")
        lo, hi = rational_diagonal_sum_bracket(64)
        assert float(lo) - 1e-12 <= res.total <= float(hi) + 1e-12

    def test_constant_weight_log_discrepancy(self):
        # F = 1, beta = 0: sum ~ sqrt(n) with an O(log n) gap
        fitted = max(
            euler_maclaurin_check(n, 0.0, 0.0, kind="one").discrepancy / math.log(n)
            for n in (64, 128, 256)
        )
        for n in (2048, 8192):
            res = euler_maclaurin_check(n, 0.0, 0.0, kind="one")
            assert res.discrepancy <= 2.0 * fitted * math.log(n)
            assert res.scaled_integral == pytest.approx(math.sqrt(n), rel=1e-12)

    def test_normalized_discrepancy_slope(self):
        ns = [2**e for e in range(6, 14)]
        disc = [
            euler_maclaurin_check(n, 1.5, 0.5).discrepancy / math.log(n) for n in ns
        ]
        fit = fit_exponent(np.array(ns, float), np.array(disc))
        assert fit.slope <= 0.5 + 0.25

    def test_uniformity_in_oscillation_scale(self):
        consts = {}
        for a in (0.0, 1.0, 2.0 * math.sqrt(2.0)):
            consts[a] = max(
                euler_maclaurin_check(n, a, beta).discrepancy / (n**beta * math.log(n))
                for beta in (-0.5, 0.0, 0.5)
                for n in (64, 256, 1024, 4096)
            )
        vals = list(consts.values())
        assert max(vals) / min(vals) <= 3.0

    def test_domain(self):
        with pytest.raises(ValueError):
            euler_maclaurin_check(2, 1.0, 0.0)
        with pytest.raises(ValueError):
            euler_maclaurin_check(64, 1.0, -0.75)
        with pytest.raises(ValueError):
            euler_maclaurin_check(64, 1.0, 0.0, kind="sin")


class TestJ0Band:
    def test_stated_band(self):
        lo, hi = j0_band()
        assert 0.2 <= lo and hi <= 1.5


class TestProp14Suite:
    def test_d3_report(self):
        rep = prop14_suite(3, rate_ns=(100, 200, 400, 800), band_ns=(64, 128, 256))
        assert rep.rate_kind == "profile-sup"
        assert -0.65 <= rep.rate_fit.slope <= -0.35
        assert rep.far_max_ratio < 1.0
        assert rep.near_max / rep.near_min <= 10.0

    def test_d2_uses_diagonal_envelope(self):
        rep = prop14_suite(2, band_ns=(64, 128))
        assert rep.rate_kind == "diag-envelope"
        assert -0.35 <= rep.rate_fit.slope <= -0.15

    def test_checks_structure(self):
        rep = prop14_suite(3, rate_ns=(100, 200, 400, 800), band_ns=(128, 256))
        ids = [c.criterion for c in rep.checks]
        assert ids == ["A4-rate", "P14-FAR", "P14-NEAR"]
        assert rep.passed

    def test_d4_one_sided_rate(self):
        # the guaranteed remainder is an upper bound: beating it must pass
        rep = prop14_suite(4, rate_ns=(100, 200, 400, 800), band_ns=(64, 256, 1024))
        assert rep.checks[0].criterion == "P14-rate"
        assert rep.rate_fit.slope <= -0.35
        assert rep.passed
