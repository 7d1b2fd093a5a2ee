"""Fixed-point verification toolkit for finite G-metric spaces."""

__version__ = "0.1.0"

from gfix.core import (
    DEFAULT_EPSILON,
    AxiomViolation,
    ConditionReport,
    FiniteGSpace,
    FiniteMetricSpace,
    InputError,
    IterationTrace,
    MetricViolation,
    PointId,
    SelfMap,
    validate_space,
)
from gfix.gmetric import (
    AxiomVerdict,
    delta_metric,
    euclidean_metric,
    g_from_metric_max,
    g_from_metric_sum,
    is_g_cauchy_tail,
    verify_axioms,
)
from gfix.conditions import (
    ContractionKind,
    banach_tight_lambda,
    check_condition_one,
    condition_report,
    kannan_tight_lambda,
    reich_check,
    reich_uniform_tight_lambda,
)
from gfix.solver import enumerate_fixed_points, picard_iterate, verify_theorem_conclusion
