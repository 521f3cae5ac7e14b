"""Convergence conditions: verdicts, brackets, Upsilon, theta independence."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscharm.conditions import (
    CoefficientSequence,
    ThetaFamily,
    entropic_integral,
    lp_condition,
    n_star,
    sz_condensed_blocks,
    sz_condition,
    theta_independence_report,
    upsilon,
)


def gamma_family(d: int, gamma: float) -> CoefficientSequence:
    """c(n)^2 = n^{d/2 - 1} log(n+1)^{-gamma}, the borderline family."""
    return CoefficientSequence.power_log(a=(2.0 - d) / 4.0, b=gamma / 2.0, n0=2)


class TestCoefficientSequence:
    def test_explicit_accessors(self):
        c = CoefficientSequence.explicit([0.5, 0.0, 2.0])
        assert c.c(1) == 0.5 and c.c(2) == 0.0 and c.c(3) == 2.0 and c.c(4) == 0.0
        np.testing.assert_allclose(c.c_many(np.array([1, 3, 9])), [0.5, 2.0, 0.0])
        assert c.support_end == 3

    def test_law_accessors(self):
        c = CoefficientSequence.power_log(a=1.0, b=2.0, n0=3)
        assert c.c(2) == 0.0
        assert c.c(5) == pytest.approx(0.2 * math.log(6.0) ** -2.0, rel=1e-14)
        assert c.support_end is None

    def test_validation(self):
        with pytest.raises(ValueError):
            CoefficientSequence.explicit([-1.0])
        with pytest.raises(ValueError):
            CoefficientSequence.power_log(a=math.inf, b=0.0)
        with pytest.raises(ValueError):
            CoefficientSequence.explicit([1.0]).c(0)


class TestSalemZygmundCondition:
    def test_zero_sequence(self):
        rep = sz_condition(2, CoefficientSequence.explicit(np.zeros(8)), l_max=64)
        assert rep.verdict == "converging"
        assert rep.partial_sums[-1] == 0.0

    @pytest.mark.parametrize("d", [2, 3])
    def test_gamma_family_verdicts(self, d):
        # integral-test oracle: tails sum 1/(n log^g n) ~ log^{1-g}(l)/(g-1),
        # so the outer terms are ~ 1/(l log^{g/2} l): converging iff g > 2
        rep3 = sz_condition(d, gamma_family(d, 3.0), l_max=50_000)
        rep15 = sz_condition(d, gamma_family(d, 1.5), l_max=50_000)
        assert rep3.verdict == "converging"
        assert rep15.verdict == "diverging"
        assert math.isfinite(rep3.upper[-1])
        assert math.isinf(rep15.upper[-1])

    def test_partial_sums_monotone_and_bracketed(self):
        rep = sz_condition(2, gamma_family(2, 3.0), l_max=20_000)
        assert np.all(np.diff(rep.partial_sums) >= 0)
        # every later partial sum lies inside every earlier bracket
        for i in range(len(rep.cutoffs)):
            for j in range(i, len(rep.cutoffs)):
                assert rep.lower[i] <= rep.partial_sums[j] * (1 + 1e-12) + 1e-15
                assert rep.partial_sums[j] <= rep.upper[i] * (1 + 1e-12)

    def test_condensed_form_equivalence(self):
        # bounded condensed partial sums iff bounded plain partial sums
        conv = sz_condensed_blocks(2, gamma_family(2, 3.0), range(5))
        div = sz_condensed_blocks(2, gamma_family(2, 1.5), range(5))
        assert np.all(np.diff(conv) < 0)  # summable-looking: terms shrink
        assert np.all(np.diff(div) > 0)   # divergent: terms grow
        assert sz_condition(2, gamma_family(2, 3.0), l_max=20_000).verdict == "converging"
        assert sz_condition(2, gamma_family(2, 1.5), l_max=20_000).verdict == "diverging"

    def test_explicit_support_is_exact(self):
        vals = 1.0 / np.arange(1.0, 201.0)
        rep = sz_condition(2, CoefficientSequence.explicit(vals), l_max=64)
        # brute force of the finite double sum
        def tail(l):
            ns = np.arange(l, 201)
            return float(np.sum(vals[l - 1 :] ** 2 / ns))
        brute = sum(math.sqrt(tail(l)) / (l * math.sqrt(math.log(l))) for l in range(2, 201))
        assert rep.partial_sums[-1] == pytest.approx(brute, rel=1e-12)
        assert rep.upper[-1] == pytest.approx(brute, rel=1e-9)

    def test_brute_double_sum_oracle(self):
        # inner tails summed directly over two million terms plus an
        # elementary remainder integral, matched at the report cutoffs
        coeffs = CoefficientSequence.power_log(a=0.0, b=1.5, n0=2)
        ns = np.arange(2, 2_000_001, dtype=float)
        g = 1.0 / (ns * np.log(ns + 1.0) ** 3)
        suffix = np.concatenate([np.cumsum(g[::-1])[::-1], [0.0]])
        rest = 0.5 / math.log(2e6) ** 2  # int of 1/(t log^3 t) beyond the range
        rep = sz_condition(2, coeffs, l_max=50_000)
        for idx in (2, 5, 9):
            cut = int(rep.cutoffs[idx])
            brute = sum(
                math.sqrt(suffix[l - 2] + rest) / (l * math.sqrt(math.log(l)))
                for l in range(2, cut + 1)
            )
            assert rep.partial_sums[idx] == pytest.approx(brute, rel=1e-6)
            assert rep.lower[idx] <= brute <= rep.upper[idx]

    def test_bracket_contains_deeper_refinement(self):
        coeffs = CoefficientSequence.power_log(a=0.0, b=1.5, n0=2)
        shallow = sz_condition(2, coeffs, l_max=20_000)
        deep = sz_condition(2, coeffs, l_max=200_000)
        final = deep.partial_sums[-1]
        assert np.all(shallow.lower <= final * (1 + 1e-12))
        assert np.all(shallow.upper >= final)

    def test_inner_divergence_flagged(self):
        rep = sz_condition(2, CoefficientSequence.power_log(a=0.0, b=0.0, n0=1), l_max=1000)
        assert rep.verdict == "diverging"
        assert "infinite" in rep.reason


class TestLpCondition:
    def test_zero_sequence(self):
        rep = lp_condition(2, 2.0, CoefficientSequence.explicit(np.zeros(4)), l_max=64)
        assert rep.verdict == "converging" and rep.partial_sums[-1] == 0.0

    def test_fubini_identity_d2_p2(self):
        vals = np.random.default_rng(3).uniform(0.0, 1.0, 80)
        rep = lp_condition(2, 2.0, CoefficientSequence.explicit(vals), l_max=128)
        assert rep.partial_sums[-1] == pytest.approx(float(np.sum(vals**2)), abs=1e-12)

    @pytest.mark.parametrize("d,p", [(2, 2.0), (3, 2.0), (2, 4.0)])
    def test_threshold_flip_matches_analysis(self, d, p):
        # family c(n)^2 = n^{d/2 - 1 - eps}: converging iff eps > d/p
        def verdict(eps):
            coeffs = CoefficientSequence.power_log(a=-(d / 2.0 - 1.0 - eps) / 2.0, b=0.0, n0=1)
            return lp_condition(d, p, coeffs, l_max=4096).verdict

        threshold = d / p
        assert verdict(threshold + 0.05) == "converging"
        assert verdict(threshold - 0.05) == "diverging"
        lo, hi = threshold - 0.5, threshold + 0.5
        for _ in range(12):
            mid = 0.5 * (lo + hi)
            if verdict(mid) == "converging":
                hi = mid
            else:
                lo = mid
        assert 0.5 * (lo + hi) == pytest.approx(threshold, abs=0.01)

    def test_rejects_small_p(self):
        with pytest.raises(ValueError):
            lp_condition(2, 0.5, CoefficientSequence.explicit([1.0]), l_max=64)


class TestUpsilon:
    W = CoefficientSequence.explicit(0.5 ** np.arange(1, 61))

    def test_zero_time(self):
        assert upsilon(0.7, self.W, 0.0) == 0.0

    def test_saturated_time(self):
        assert upsilon(0.7, self.W, 1.0) == pytest.approx(
            math.sqrt(float(np.sum(self.W.values))), rel=1e-12
        )

    def test_direct_sum_oracle(self):
        direct = math.sqrt(
            sum(0.5**n * min(1.0, n**0.5 * 0.25) ** 2 for n in range(1, 61))
        )
        assert upsilon(0.5, self.W, 0.25) == pytest.approx(direct, rel=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(1e-4, 1.0), st.floats(1e-4, 1.0))
    def test_monotone_and_bounded(self, t1, t2):
        lo, hi = sorted((t1, t2))
        u_lo, u_hi = upsilon(0.5, self.W, lo), upsilon(0.5, self.W, hi)
        assert u_lo <= u_hi + 1e-12
        assert u_hi**2 <= float(np.sum(self.W.values)) + 1e-12

    def test_rejects_unsummable(self):
        with pytest.raises(ValueError):
            upsilon(1.0, CoefficientSequence.power_log(a=1.0, b=0.5, n0=1), 0.5)


class TestEntropicIntegral:
    def test_zero_weights(self):
        res = entropic_integral(1.0, CoefficientSequence.explicit([0.0]))
        assert res.value == 0.0 and not res.divergent

    def test_two_point_closed_form(self):
        # Upsilon(t) = min(1, t), so the integral is int_0^1 dt/sqrt(-log t)
        # = sqrt(pi) exactly
        res = entropic_integral(1.0, CoefficientSequence.explicit([1.0]))
        assert res.value == pytest.approx(math.sqrt(math.pi), rel=3e-6)

    def test_self_convergence_oracle(self):
        base = entropic_integral(1.0, CoefficientSequence.explicit([1.0]))
        refined = entropic_integral(1.0, CoefficientSequence.explicit([1.0]), subdivide=8)
        assert abs(base.value - refined.value) <= 1e-6 * refined.value

    def test_divergent_flagged(self):
        res = entropic_integral(
            0.5, CoefficientSequence.power_log(a=1.0, b=1.5, n0=2), max_panels=80
        )
        assert res.divergent
        assert res.value > 0

    def test_sum_comparison_band(self):
        # the integral and the weighted V_p sum agree within a fixed band
        families = [
            CoefficientSequence.power_log(a=1.5, b=0.0, n0=2),
            CoefficientSequence.power_log(a=2.0, b=0.0, n0=1),
            CoefficientSequence.power_log(a=1.0, b=3.0, n0=2),
            CoefficientSequence.explicit(0.5 ** np.arange(1, 41)),
            CoefficientSequence.explicit(1.0 / np.arange(1.0, 2001.0) ** 1.8),
        ]
        for weights in families:
            res = entropic_integral(0.5, weights, max_panels=60)
            p_cut = int(min(2 ** min(res.panels_used, 16), 10**5))
            rep = theta_independence_report((0.5,), weights, p_max=p_cut)
            ratio = res.value / rep.totals[0.5]
            assert 0.1 <= ratio <= 10.0


class TestNStar:
    def test_integer_theta_exact(self):
        assert n_star(2**54, 3.0) == 2**18
        assert n_star(2**16, 2.0) == 2**8
        assert n_star(26, 2.0) == 5

    def test_inverse_integer_theta_exact(self):
        assert n_star(2**6, 1.0 / 3.0) == 2**18
        assert n_star(7, 0.5) == 49

    def test_general_theta(self):
        assert n_star(10, 0.7) == math.floor(10 ** (1 / 0.7))
        assert n_star(1, 0.37) == 1

    def test_domain(self):
        with pytest.raises(ValueError):
            n_star(0, 1.0)
        with pytest.raises(ValueError):
            n_star(4, -1.0)


class TestThetaIndependence:
    def test_v_counting_closed_form(self):
        n_sup = 37
        fam = ThetaFamily(1.0, CoefficientSequence.explicit(np.ones(n_sup)))
        for p in range(1, 50):
            assert fam.v_p(p) == max(0, n_sup - p + 1)

    def test_u_p_direct(self):
        w = CoefficientSequence.explicit([1.0, 2.0, 3.0, 4.0])
        fam = ThetaFamily(1.0, w)
        # n_star(3) = 3: U = 1*1^2 + 2*2^2
        assert fam.u_p(3) == pytest.approx(1.0 + 8.0, rel=1e-14)

    def test_rescaling_identity_symbolic_case(self):
        # V_{2^{4 T^2}}(T) with T = 2 sums c_n from n = 2^8 = 256
        w = CoefficientSequence.explicit(1.0 / np.arange(1.0, 1001.0) ** 2)
        fam2 = ThetaFamily(2.0, w)
        fam_half = ThetaFamily(0.5, w)
        lhs = fam2.v_p(2**16)
        rhs = fam_half.v_p(2**4)
        direct = float(np.sum(w.values[255:]))
        assert lhs == rhs == pytest.approx(direct, rel=1e-14)

    def test_report_identity_and_monotonicity(self):
        w = CoefficientSequence.explicit(1.0 / np.arange(1.0, 300_001.0) ** 2)
        rep = theta_independence_report((0.5, 1.0, 2.0), w, p_max=512)
        assert rep.identity_ok
        assert rep.monotone_ok
        assert len(rep.identity_checks) == 12  # T in {2, 3}, p <= 6

    def test_pairwise_ratio_band_on_families(self):
        families = [
            CoefficientSequence.power_log(a=1.5, b=0.0, n0=2),
            CoefficientSequence.power_log(a=1.0, b=3.0, n0=2),
            CoefficientSequence.power_log(a=1.0, b=1.5, n0=2),
        ]
        for w in families:
            rep = theta_independence_report((0.5, 1.0, 2.0), w, p_max=2000)
            assert rep.max_pairwise_ratio <= 10.0

    def test_partials_nondecreasing(self):
        w = CoefficientSequence.power_log(a=1.5, b=0.0, n0=1)
        rep = theta_independence_report((1.0,), w, p_max=500)
        assert np.all(np.diff(rep.partials[1.0]) >= 0)

    def test_v_p_nonincreasing_in_p(self):
        w = CoefficientSequence.power_log(a=1.5, b=0.0, n0=1)
        for theta in (0.5, 1.0, 2.0):
            fam = ThetaFamily(theta, w)
            vals = [fam.v_p(p) for p in range(1, 60)]
            assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))
