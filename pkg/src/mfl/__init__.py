"""Numerical verification toolkit for multilinear fractional operators.

Grid-sampled functions on [-L, L]^n feed discrete fractional integral and
maximal operators; Lebesgue, weak, Morrey, Orlicz, and BMO norms turn the
mapping theorems of the subject into checkable lhs/rhs ratios. The verify
module runs registered inequalities against function corpora, hls holds the
sharp-constant study for the bilinear form, and the cli renders reports.
"""

from .exponents import ExponentSet, derive, kappa_chain, theorem_ids, theorem_summary, validate
from .grid import (
    Ball,
    BallFamily,
    Domain,
    GridFunction,
    make_ball_family,
    make_corpus,
    make_domain,
    member_from_params,
    sample,
    unit_ball_volume,
)
from .kernel import (
    Kernel,
    angular_power_kernel,
    constant_kernel,
    eval_kernel,
    parse_kernel,
    sign_kernel,
    sphere_norm,
    spherical_mean,
)
from .norms import (
    bmo_norm,
    llogl_morrey_norm,
    lp_norm,
    luxemburg_norm,
    morrey_norm,
    weak_lp_norm,
    weak_morrey_norm,
)
from .operators import (
    OperatorSpec,
    eval_bilinear_grafakos,
    eval_fractional_integral,
    eval_fractional_maximal,
    eval_lerner_maximal,
    eval_noncentered_maximal,
    eval_power_maximal,
    fractional_integral_at,
    fractional_maximal_at,
)
from .estimates import (
    adams_optimal_sigma,
    adams_split,
    hedberg_optimal_sigma,
    hedberg_split,
    sigma_ladder,
)
from .hls import (
    extremal,
    hls_form,
    hls_sharpness_ratio,
    lieb_constant,
    olsen_product,
    sharpness_ladder,
)
from .verify import (
    CheckResult,
    ConstantEstimate,
    HypothesisError,
    adversarial_search,
    check,
    estimate_constant,
    exact_inequality_suite,
    lerner_maximal_checks,
    pointwise_bound_ratio,
)

__version__ = "0.1.0"
