"""Evidential threat correlation with non-monotonic conflict resolution."""

from .evidence import (
    Argument,
    BadTable,
    ContourRow,
    build_coverage_bel,
    build_location_bel,
    build_movement_bel,
    build_separation_bel,
)
from .frame import Disc, DistanceBand, Hypothesis, PairConstraint, ThreatElement, THREAT_FRAME
from .mass import (
    CombinationResult,
    FiniteAlgebra,
    MassFunction,
    TotalConflict,
    bel,
    combine,
    combine_all,
    discount,
    normalize,
    pl,
    vacuous,
)
from .resolver import (
    CoarseReport,
    ConflictAttribution,
    DiscreditingFactor,
    PresenceBelief,
    PresenceTest,
    ResolutionTrace,
    attribute_conflict,
    coarse_report,
    resolve,
)
from .scenario import Scenario, load_scenario

__version__ = "0.1.0"
