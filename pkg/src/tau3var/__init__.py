"""Exact correlation sums, singular series and progression variance for tau3."""

from .arith import (
    DivisorTable,
    RationalPhase,
    ramanujan_sum,
    ramanujan_sum_bruteforce,
    sieve,
    tau_k_pointwise,
)
from .constants import (
    EULER_GAMMA,
    STIELTJES_GAMMA1,
    StieltjesValue,
    dirichlet_F,
    euler_gamma,
    euler_product_A3,
    f_coefficient,
    s8_constant,
    stieltjes0,
    stieltjes0_limit,
    stieltjes1,
    stieltjes1_limit,
    stieltjes_value,
    zeta,
)
from .lemmas import (
    LemmaCheck,
    check_cqdeltam,
    check_D_main_term,
    check_geometric_integrals,
    check_h_sums,
    check_taudm,
    cqdeltam_sweep,
    d_main_term_sweep,
)
from .correlation import (
    CorrelationSeries,
    MomentStatistic,
    correlation_series,
    default_delta,
    eval_D,
    eval_F,
    eval_G_delta,
    second_moment_statistic,
)
from .singular import (
    EMTCoeffs,
    LaurentCoeffs,
    MainTermPoly,
    WeightVector,
    emt_coeffs,
    emt_poly,
    laurent_coeffs,
    laurent_coeffs_oracle,
    residue_main_term,
    s_delta,
    s_delta_profile,
    t_sums,
    weights,
)
from .variance import (
    APSumTable,
    VarianceReport,
    ap_sums,
    emt_tail_bounds,
    q1,
    variance_Q,
    variance_sweep,
)
from .verify import run_verification_suite

__version__ = "0.1.0"
