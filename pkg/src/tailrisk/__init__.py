"""Expectile, expected shortfall and value-at-risk toolkit.

Risk evaluation for parametric loss models and empirical samples,
exact expectile/ES comparison bounds, extreme-value tail expansions,
concentration-based sample-size planning, Euler capital allocations,
and Monte Carlo convergence tables.
"""

from .allocation import (
    AsymptoticRatioRow,
    Portfolio,
    es_euler,
    euler_asymptotic_ratio,
    expectile_euler,
)
from .asymptotics import (
    ExpansionResult,
    extreme_expectile_estimate,
    frechet_beta_star_ratio,
    frechet_first_order_constant,
    frechet_ratio,
    frechet_second_order_coefficient,
    gumbel_relation,
    hill_estimator,
    ratio_expansion,
    weibull_beta_star_ratio,
    weibull_ratio,
)
from .concentration import (
    ExpMoment,
    PolyMoment,
    SampleSizeReport,
    SubExpMoment,
    TailClass,
    deviation_bound,
    parse_tail_class,
    sample_size,
    size_ratio_curve,
    var_sample_size,
)
from .distributions import (
    Distribution,
    EvClassification,
    Exponential,
    Pareto,
    PowerBeta,
    Sample,
    StudentT,
    TwoPoint,
    Uniform01,
    parse_distribution,
)
from .montecarlo import (
    RatioTableRow,
    SimulationConfig,
    cell_seed,
    figure_series,
    ratio_table,
    ratio_table_csv,
    render_csv,
    splitmix64,
    wasserstein_empirical,
    wasserstein_exact,
)
from .risk_core import (
    BetaStarResult,
    Bounds,
    ExpectileDistortion,
    MixtureES,
    beta_star,
    distortion_curves,
    distortion_value,
    expectile,
    expectile_bounds,
    expectile_from_es,
    expected_shortfall,
    foc_residual,
    oce,
    value_at_risk,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticRatioRow",
    "BetaStarResult",
    "Bounds",
    "Distribution",
    "EvClassification",
    "ExpMoment",
    "ExpansionResult",
    "ExpectileDistortion",
    "Exponential",
    "MixtureES",
    "Pareto",
    "PolyMoment",
    "Portfolio",
    "PowerBeta",
    "RatioTableRow",
    "Sample",
    "SampleSizeReport",
    "SimulationConfig",
    "StudentT",
    "SubExpMoment",
    "TailClass",
    "TwoPoint",
    "Uniform01",
    "beta_star",
    "cell_seed",
    "deviation_bound",
    "distortion_curves",
    "distortion_value",
    "es_euler",
    "euler_asymptotic_ratio",
    "expectile",
    "expectile_bounds",
    "expectile_euler",
    "expectile_from_es",
    "expected_shortfall",
    "extreme_expectile_estimate",
    "figure_series",
    "foc_residual",
    "frechet_beta_star_ratio",
    "frechet_first_order_constant",
    "frechet_ratio",
    "frechet_second_order_coefficient",
    "gumbel_relation",
    "hill_estimator",
    "oce",
    "parse_distribution",
    "parse_tail_class",
    "ratio_expansion",
    "ratio_table",
    "ratio_table_csv",
    "render_csv",
    "sample_size",
    "size_ratio_curve",
    "splitmix64",
    "value_at_risk",
    "var_sample_size",
    "wasserstein_empirical",
    "wasserstein_exact",
    "weibull_beta_star_ratio",
    "weibull_ratio",
]
