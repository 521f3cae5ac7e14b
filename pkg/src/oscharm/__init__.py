"""Spectral function of the isotropic quantum harmonic oscillator.

Exact Cauchy-product evaluation of the eigenspace projector kernel
e_{d,n}(x, y), its Bessel-type approximations, Dudley pseudo-distances,
convergence-condition functionals for the associated random series, a
covariance-based Gaussian sampler, and the numerical verification
suites tying them together.
"""

from .conditions import (
    CoefficientSequence,
    ConditionReport,
    ThetaFamily,
    entropic_integral,
    lp_condition,
    n_star,
    sz_condensed_blocks,
    sz_condition,
    theta_independence_report,
    upsilon,
)
from .dudley import DudleyScan, delta_n, delta_n_general, dudley_distance, dudley_scan
from .geometry import (
    HatCoords,
    SpherePair,
    canonical_points,
    chord_from_s,
    hat_coords,
    hat_coords_general,
    s_from_chord,
)
from .sampler import (
    FieldSample,
    StationarySpec,
    arc_grid,
    field_covariance,
    gaussian_sup_test,
    sample_field,
    stationary_kernel,
    sup_norm_partial_sums,
)
from .special import (
    BesselOrder,
    HermiteBatch,
    bd_weight,
    bd_weights,
    eigenspace_dim,
    hermite_batch,
    hermite_deriv,
    hermite_values,
    normalized_bessel,
    normalized_bessel_many,
)
from .spectral import (
    MehlerComparison,
    OmegaEval,
    SpectralProfile,
    bessel_approx,
    mehler_closed_form,
    mehler_partial_sum,
    omega,
    omega_second_deriv_zero,
    parity_check,
    profile,
    spectral_exact,
    spectral_levels,
    spectral_oracle,
    two_term_approx,
)
from .verify import (
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

__version__ = "0.1.0"
