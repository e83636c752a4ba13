"""Volterra quadratic stochastic operators of a two-sex population on S^1 x S^1."""
from .core import (
    ConsistencyError,
    Converged,
    Cycle,
    MaxIterReached,
    ParamSet,
    State2,
    State4,
    Trajectory,
    iterate,
    lift,
    project,
    step2,
    step4,
)
from .fixed_points import (
    FixedPointSet,
    LocusKind,
    StabilityClass,
    StabilityReport,
    classify,
    continuum_condition,
    eigenvalues,
    fixed_point_set,
    jacobian,
    stability_at,
    x_tilde,
)
from .subfamilies import (
    ClosedFormLimit,
    Subfamily,
    SubfamilyTag,
    closed_form_limit,
    detect_subfamily,
)

__version__ = "0.1.0"
