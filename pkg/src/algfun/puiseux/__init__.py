"""Puiseux expansions by Newton polygons and quadratic Newton iteration."""

from .expansion import (
    INFINITY,
    ORIGIN,
    ChecksumError,
    ConjugateClass,
    Expansion,
    expand_at,
    group_conjugate_classes,
    initial_classes,
    local_polynomial,
)
from .iteration import (
    Leaf,
    back_substitute,
    expand_leaf,
    initial_segments,
    newton_iterate_series,
    normalize_for_iteration,
)
from .polygon import NewtonPolygon, Segment, characteristic_roots, newton_polygon, polygon_iterate
from .series import (
    BranchType,
    PuiseuxSeries,
    classify_branch,
    conjugate_series,
    derivative_limit,
    evaluate_series,
    series_order,
    symmetric_sum,
    term_for_order,
    to_lines,
    truncation_error,
)
