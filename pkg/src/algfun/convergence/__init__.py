"""Radius of convergence: root test, series comparison and integration."""

from .clsp import (
    BOTH,
    COMPARISON,
    INTEGRATION,
    AmbiguousMatch,
    ConvergenceResult,
    ConvergenceWalk,
    Landing,
    UnresolvedError,
    WalkSettings,
    landing_table,
    match_landing,
    perimeter_entry,
    separation_tolerance,
    series_value,
)
from .continuation import Arc, ContinuationError, Line, RootTracker, detour_path, integrate_continuation
from .roottest import RootTestError, RootTestEstimate, lower_bound_fit, root_test_estimate, root_test_points
