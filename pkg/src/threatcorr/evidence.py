"""Builders for the five threat-correlation belief functions and the Argument record."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .frame import (
    FULL,
    THREAT_FRAME,
    UNCONSTRAINED,
    ZERO_DISTANCE,
    Disc,
    DistanceBand,
    PairConstraint,
    Point,
    threat_element,
)
from .mass import MASS_TOL, MassFunction, discount

# Roles the conflict attribution and route scoring look up.
LOCATION1 = "location1"
LOCATION2 = "location2"
MOVEMENT = "movement"
COVERAGE = "coverage"
SEPARATION = "separation"
ROLES = (LOCATION1, LOCATION2, MOVEMENT, COVERAGE, SEPARATION)


class BadTable(ValueError):
    """A contour table that is not nested or whose masses do not sum to one."""


@dataclass(frozen=True)
class ContourRow:
    lo: float
    mass: float
    hi: float = math.inf


@dataclass(frozen=True)
class Argument:
    """A belief function with its supporting structure and current discount.

    ``mass`` always holds the undiscounted belief function; discounting is
    applied on demand by :meth:`discounted` so repeated rate updates never
    compound.
    """

    id: str
    mass: MassFunction
    role: Optional[str] = None
    grounds: str = ""
    warrant: str = ""
    backing: str = ""
    rebuttals: tuple[str, ...] = ()
    discount_rate: float = 0.0
    discount_weight: float = 1.0
    table: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.discount_rate <= 1.0:
            raise ValueError(f"discount rate {self.discount_rate!r} outside [0, 1]")

    def discounted(self) -> MassFunction:
        return discount(self.mass, self.discount_rate)

    def with_rate(self, rate: float) -> "Argument":
        return replace(self, discount_rate=min(1.0, max(0.0, rate)))


def _check_masses(name: str, masses: Sequence[float], extra: float = 0.0):
    if any(not (m > 0.0) for m in masses) or not 0.0 <= extra <= 1.0:
        raise BadTable(f"{name}: masses must be positive")
    total = math.fsum(masses) + extra
    if abs(total - 1.0) > MASS_TOL:
        raise BadTable(f"{name}: masses sum to {total:.6g}, expected 1")


def build_location_bel(
    coordinate: int,
    center: Point,
    rows: Sequence[ContourRow],
    id: Optional[str] = None,
    **meta,
) -> Argument:
    """Nested discs about ``center`` constraining the first or second location."""
    if coordinate not in (1, 2):
        raise BadTable(f"coordinate must be 1 or 2, got {coordinate!r}")
    role = LOCATION1 if coordinate == 1 else LOCATION2
    name = id or role
    radii = [r.lo for r in rows]
    if not rows:
        raise BadTable(f"{name}: empty contour table")
    if any(not math.isfinite(r) or r < 0 for r in radii):
        raise BadTable(f"{name}: radii must be finite and non-negative")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise BadTable(f"{name}: radii must be strictly increasing")
    _check_masses(name, [r.mass for r in rows])
    pairs = []
    for row in rows:
        disc = Disc(center, row.lo)
        pc = PairConstraint(disc, FULL) if coordinate == 1 else PairConstraint(FULL, disc)
        pairs.append((threat_element(pc, pc), row.mass))
    table = {"center": tuple(center), "radius": radii, "mass": [r.mass for r in rows]}
    return Argument(name, MassFunction(THREAT_FRAME, pairs), role=role, table=table, **meta)


def _check_nested_bands(name: str, rows: Sequence[ContourRow]):
    for a, b in zip(rows, rows[1:]):
        if not (b.lo <= a.lo and a.hi <= b.hi and (b.lo, b.hi) != (a.lo, a.hi)):
            raise BadTable(f"{name}: bands [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] are not nested")


def build_movement_bel(
    diagonal_mass: float,
    band_rows: Sequence[ContourRow],
    id: Optional[str] = None,
    **meta,
) -> Argument:
    """Belief about how far a single threat may have moved.

    The diagonal element reads "unchanged, if same"; each band row reads
    "if moved, the distance lies in [lo, hi]".  Neither constrains the
    different-threat slice.
    """
    name = id or MOVEMENT
    for row in band_rows:
        if not (0.0 <= row.lo <= row.hi):
            raise BadTable(f"{name}: invalid band [{row.lo}, {row.hi}]")
    _check_nested_bands(name, band_rows)
    _check_masses(name, [r.mass for r in band_rows], diagonal_mass)
    pairs = []
    if diagonal_mass > 0.0:
        pairs.append((threat_element(PairConstraint(band=ZERO_DISTANCE), UNCONSTRAINED), diagonal_mass))
    for row in band_rows:
        same = PairConstraint(band=DistanceBand(row.lo, row.hi))
        pairs.append((threat_element(same, UNCONSTRAINED), row.mass))
    table = {
        "diagonal_mass": diagonal_mass,
        "lower": [r.lo for r in band_rows],
        "upper": [r.hi for r in band_rows],
        "mass": [r.mass for r in band_rows],
    }
    return Argument(name, MassFunction(THREAT_FRAME, pairs), role=MOVEMENT, table=table, **meta)


def build_coverage_bel(same_mass: float, id: Optional[str] = None, **meta) -> Argument:
    """Belief that prior intelligence was thorough enough that no threat was missed."""
    name = id or COVERAGE
    if not 0.0 <= same_mass <= 1.0:
        raise BadTable(f"{name}: same-threat mass {same_mass!r} outside [0, 1]")
    pairs = []
    if same_mass > 0.0:
        pairs.append((threat_element(UNCONSTRAINED, None), same_mass))
    if same_mass < 1.0:
        pairs.append((threat_element(UNCONSTRAINED, UNCONSTRAINED), 1.0 - same_mass))
    table = {"same_mass": same_mass}
    return Argument(name, MassFunction(THREAT_FRAME, pairs), role=COVERAGE, table=table, **meta)


def build_separation_bel(band_rows: Sequence[ContourRow], id: Optional[str] = None, **meta) -> Argument:
    """Belief that different threats sit at least ``lo`` apart."""
    name = id or SEPARATION
    if not band_rows:
        raise BadTable(f"{name}: empty contour table")
    lows = [r.lo for r in band_rows]
    if any(not math.isfinite(x) or x < 0 for x in lows):
        raise BadTable(f"{name}: lower distances must be finite and non-negative")
    if any(b >= a for a, b in zip(lows, lows[1:])):
        raise BadTable(f"{name}: lower distances must be strictly decreasing")
    _check_masses(name, [r.mass for r in band_rows])
    pairs = [
        (threat_element(UNCONSTRAINED, PairConstraint(band=DistanceBand(r.lo, math.inf))), r.mass)
        for r in band_rows
    ]
    table = {"lower": lows, "mass": [r.mass for r in band_rows]}
    return Argument(name, MassFunction(THREAT_FRAME, pairs), role=SEPARATION, table=table, **meta)


def rows(lo: Sequence[float], mass: Sequence[float], hi: Optional[Sequence[float]] = None) -> list[ContourRow]:
    """Zip parallel columns into contour rows."""
    if len(lo) != len(mass) or (hi is not None and len(hi) != len(lo)):
        raise BadTable("contour table columns have different lengths")
    if hi is None:
        return [ContourRow(float(a), float(m)) for a, m in zip(lo, mass)]
    return [ContourRow(float(a), float(m), float(b)) for a, m, b in zip(lo, mass, hi)]


__all__ = [
    "Argument",
    "BadTable",
    "COVERAGE",
    "ContourRow",
    "LOCATION1",
    "LOCATION2",
    "MOVEMENT",
    "ROLES",
    "SEPARATION",
    "build_coverage_bel",
    "build_location_bel",
    "build_movement_bel",
    "build_separation_bel",
    "rows",
]
