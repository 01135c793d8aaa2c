"""Isomorphic means of numbers and functions.

A mean is taken *through a frame*: a pair of strictly monotone maps, one
re-scaling the x-axis and one the value axis.  Averaging in the transformed
coordinates and mapping back yields a large family of means — the ordinary,
geometric, harmonic, power and elasticity-weighted means of a function all
arise from specific frames, as do quasi-arithmetic means of numbers and the
two-parameter power-map bivariate means.

The package computes these means with certified quadrature, converts
between the endpoint-secant (Cauchy) form and the integral form, and orders
pairs of means by monotonicity/convexity criteria whose verdicts are always
cross-checked numerically.
"""
from ._errors import (
    ComparisonContradiction,
    DivergentIntegralError,
    DomainError,
    ExprSyntaxError,
    InversionError,
    IsomeanError,
    NonMonotoneError,
    NotBondedError,
    PreconditionError,
    WeightError,
)
from .bivariate import (
    Antiderivative,
    CauchyMean,
    QuasiStolarskyParams,
    cauchy_mean_report,
    cauchy_mean_value,
    cauchy_to_classV,
    classV_bivariate,
    classV_to_cauchy,
    compare_G_E,
    losonczi_necessary,
    losonczi_sufficient,
    quasi_stolarsky,
    s_function,
    s_second_root,
    sigma_GE,
    stolarsky_branch,
)
from .classify import (
    ConvexityClass,
    MonotonicityClass,
    classify_convexity,
    classify_monotonicity,
    sample_grid,
)
from .compare import (
    SCENARIOS,
    ComparisonScenario,
    compare_function_means,
    first_mvt_mean,
    make_scenario,
)
from .expr import (
    Expr,
    ScaleShift,
    as_scalar_fn,
    as_vector_fn,
    differentiate,
    evaluate,
    h_scaleshift,
    hv_scaleshift,
    to_string,
    v_scaleshift,
)
from .frame import Frame, GeneratorMap, estimate_range_hull, generator_map, make_frame
from .funmean import (
    ConjugationReport,
    MeanProblem,
    MeanResult,
    class_I_mean,
    class_II_mean,
    class_III_mean,
    class_IV_mean,
    class_V_mean,
    class_VI_mean,
    class_VII_mean,
    conjugation_classII,
    dvi_mean,
    dvi_mean_riemann_oracle,
    elastic_mean,
    geometric_mean,
    harmonic_mean,
    mean_problem,
    plain_mean,
    power_integral_mean,
)
from .intervals import Interval
from .nummean import WeightedTuple, compare_number_means, iso_mean, iso_weighted_mean
from .parse import parse
from .quadrature import integrate
from .verdict import Verdict
from .verify import GROUPS, CheckResult, run_checks

__all__ = [
    "Antiderivative",
    "CauchyMean",
    "CheckResult",
    "ComparisonContradiction",
    "ComparisonScenario",
    "ConjugationReport",
    "ConvexityClass",
    "DivergentIntegralError",
    "DomainError",
    "Expr",
    "ExprSyntaxError",
    "Frame",
    "GROUPS",
    "GeneratorMap",
    "Interval",
    "InversionError",
    "IsomeanError",
    "MeanProblem",
    "MeanResult",
    "MonotonicityClass",
    "NonMonotoneError",
    "NotBondedError",
    "PreconditionError",
    "QuasiStolarskyParams",
    "SCENARIOS",
    "ScaleShift",
    "Verdict",
    "WeightError",
    "WeightedTuple",
    "as_scalar_fn",
    "as_vector_fn",
    "cauchy_mean_report",
    "cauchy_mean_value",
    "cauchy_to_classV",
    "classV_bivariate",
    "classV_to_cauchy",
    "class_I_mean",
    "class_II_mean",
    "class_III_mean",
    "class_IV_mean",
    "class_V_mean",
    "class_VI_mean",
    "class_VII_mean",
    "classify_convexity",
    "classify_monotonicity",
    "compare_G_E",
    "compare_function_means",
    "compare_number_means",
    "conjugation_classII",
    "differentiate",
    "dvi_mean",
    "dvi_mean_riemann_oracle",
    "elastic_mean",
    "estimate_range_hull",
    "evaluate",
    "first_mvt_mean",
    "generator_map",
    "geometric_mean",
    "h_scaleshift",
    "harmonic_mean",
    "hv_scaleshift",
    "integrate",
    "iso_mean",
    "iso_weighted_mean",
    "losonczi_necessary",
    "losonczi_sufficient",
    "make_frame",
    "make_scenario",
    "mean_problem",
    "parse",
    "plain_mean",
    "power_integral_mean",
    "quasi_stolarsky",
    "run_checks",
    "s_function",
    "s_second_root",
    "sample_grid",
    "sigma_GE",
    "stolarsky_branch",
    "to_string",
    "v_scaleshift",
]
