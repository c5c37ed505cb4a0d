"""Exact set algebra for the threat-correlation frame A x A x T.

A is the Euclidean plane and T = {S, D} says whether two localizations
belong to the same threat or to different ones.  Every focal element the
engine builds is a union of two slices, one per value of T, and each slice
is a :class:`PairConstraint`: a disc for the first location, a disc for
the second, and a closed band on the distance between them.

The feasible distances between two filled discs form one closed interval,
so emptiness and subset tests are exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Optional

from .mass import Relation

Point = tuple[float, float]

KEY_DIGITS = 9


class NonRepresentable(ValueError):
    """Two discs meet in a lens, which no Disc can represent."""


def _r(x: float) -> float:
    return round(x, KEY_DIGITS) + 0.0


@dataclass(frozen=True)
class Disc:
    """A closed disc, or the whole plane when ``center`` is None."""

    center: Optional[Point] = None
    radius: float = math.inf

    def __post_init__(self):
        if self.center is not None:
            if not (0.0 <= self.radius < math.inf):
                raise ValueError(f"disc radius must be finite and >= 0, got {self.radius!r}")
            object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
            object.__setattr__(self, "radius", float(self.radius))
        else:
            object.__setattr__(self, "radius", math.inf)

    @property
    def is_full(self) -> bool:
        return self.center is None

    def contains(self, p: Point) -> bool:
        return self.is_full or math.dist(self.center, p) <= self.radius

    def key(self):
        if self.is_full:
            return ("FULL",)
        return (_r(self.center[0]), _r(self.center[1]), _r(self.radius))


FULL = Disc()


@dataclass(frozen=True)
class DistanceBand:
    """Closed interval ``[lo, hi]`` of allowed separations; ``hi`` may be inf."""

    lo: float = 0.0
    hi: float = math.inf

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi) or math.isnan(self.hi):
            raise ValueError(f"invalid distance band [{self.lo!r}, {self.hi!r}]")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

    def contains(self, d: float) -> bool:
        return self.lo <= d <= self.hi

    def key(self):
        return (_r(self.lo), _r(self.hi))


ANY_DISTANCE = DistanceBand()
ZERO_DISTANCE = DistanceBand(0.0, 0.0)


def feasible_distance_interval(d1: Disc, d2: Disc) -> DistanceBand:
    """Exact set ``{|a - b| : a in d1, b in d2}``."""
    if d1.is_full or d2.is_full:
        return ANY_DISTANCE
    c = math.dist(d1.center, d2.center)
    reach = d1.radius + d2.radius
    return DistanceBand(max(0.0, c - reach), c + reach)


def band_intersection(b1: DistanceBand, b2: DistanceBand) -> Optional[DistanceBand]:
    lo, hi = max(b1.lo, b2.lo), min(b1.hi, b2.hi)
    if lo > hi:
        return None
    return DistanceBand(lo, hi)


def disc_intersection(d1: Disc, d2: Disc) -> Optional[Disc]:
    """Intersection of two discs when one contains the other; None when disjoint."""
    if d1.is_full:
        return d2
    if d2.is_full:
        return d1
    c = math.dist(d1.center, d2.center)
    small, big = (d1, d2) if d1.radius <= d2.radius else (d2, d1)
    if c + small.radius <= big.radius:
        return small
    if c > d1.radius + d2.radius:
        return None
    raise NonRepresentable(f"discs {d1} and {d2} overlap without containment")


@dataclass(frozen=True)
class PairConstraint:
    disc1: Disc = FULL
    disc2: Disc = FULL
    band: DistanceBand = ANY_DISTANCE

    def feasible(self) -> DistanceBand:
        return feasible_distance_interval(self.disc1, self.disc2)

    def effective_band(self) -> Optional[DistanceBand]:
        """Band clipped to the feasible distances, or None when infeasible."""
        return band_intersection(self.band, self.feasible())

    def contains(self, a: Point, b: Point) -> bool:
        return self.disc1.contains(a) and self.disc2.contains(b) and self.band.contains(math.dist(a, b))

    def key(self):
        return (self.disc1.key(), self.disc2.key(), self.band.key())


UNCONSTRAINED = PairConstraint()


def section_is_empty(pc: PairConstraint) -> bool:
    return pc.effective_band() is None


def canonical_section(pc: Optional[PairConstraint]) -> Optional[PairConstraint]:
    if pc is None:
        return None
    clipped = pc.effective_band()
    if clipped is None:
        return None
    if clipped == pc.band:
        return pc
    return replace(pc, band=clipped)


class Threat(enum.Enum):
    SAME = "S"
    DIFFERENT = "D"


@dataclass(frozen=True)
class ThreatElement:
    """A subset of A x A x T given by its two slices; None marks an empty slice.

    Construct through :func:`threat_element` to get the canonical form.
    """

    same: Optional[PairConstraint]
    diff: Optional[PairConstraint]

    @property
    def is_empty(self) -> bool:
        return self.same is None and self.diff is None

    @cached_property
    def _key(self):
        return (
            None if self.same is None else self.same.key(),
            None if self.diff is None else self.diff.key(),
        )

    @cached_property
    def _hash(self) -> int:
        return hash((self.same, self.diff))

    def __hash__(self):
        return self._hash

    def key(self):
        return self._key

    def contains(self, a: Point, b: Point, t: Threat) -> bool:
        section = self.same if t is Threat.SAME else self.diff
        return section is not None and section.contains(a, b)

    def describe(self) -> str:
        def sec(pc):
            if pc is None:
                return "empty"
            parts = []
            for label, d in (("a", pc.disc1), ("b", pc.disc2)):
                if not d.is_full:
                    parts.append(f"{label} in disc({d.center[0]:g},{d.center[1]:g};{d.radius:g})")
            if pc.band != ANY_DISTANCE:
                parts.append(f"|a-b| in [{pc.band.lo:g},{pc.band.hi:g}]")
            return " & ".join(parts) or "any"

        return f"S: {sec(self.same)} | D: {sec(self.diff)}"


def threat_element(same: Optional[PairConstraint], diff: Optional[PairConstraint]) -> ThreatElement:
    return ThreatElement(canonical_section(same), canonical_section(diff))


def canonicalize(e: ThreatElement) -> ThreatElement:
    return threat_element(e.same, e.diff)


UNIVERSAL = ThreatElement(UNCONSTRAINED, UNCONSTRAINED)
EMPTY = ThreatElement(None, None)


def _intersect_sections(p: Optional[PairConstraint], q: Optional[PairConstraint]):
    if p is None or q is None:
        return None
    d1 = disc_intersection(p.disc1, q.disc1)
    d2 = disc_intersection(p.disc2, q.disc2)
    if d1 is None or d2 is None:
        return None
    band = band_intersection(p.band, q.band)
    if band is None:
        return None
    return canonical_section(PairConstraint(d1, d2, band))


@lru_cache(maxsize=1 << 16)
def intersect_elements(e1: ThreatElement, e2: ThreatElement) -> ThreatElement:
    return ThreatElement(_intersect_sections(e1.same, e2.same), _intersect_sections(e1.diff, e2.diff))


def canonical_key_of(e: ThreatElement):
    return canonicalize(e).key()


class Hypothesis(enum.Enum):
    UNCHANGED = "U"
    MOVED = "M"
    DIFFERENT = "D"


def relation_to_hypothesis(e: ThreatElement, h: Hypothesis) -> Relation:
    """Exact relation of a nonempty canonical element to U, M or D."""
    if h is Hypothesis.DIFFERENT:
        if e.same is None:
            return Relation.SUBSET
        if e.diff is None:
            return Relation.DISJOINT
        return Relation.INTERSECTS
    band = None if e.same is None else e.same.effective_band()
    if h is Hypothesis.UNCHANGED:
        if band is None or band.lo > 0.0:
            return Relation.DISJOINT
        if e.diff is None and band.hi == 0.0:
            return Relation.SUBSET
        return Relation.INTERSECTS
    if band is None or band.hi == 0.0:
        return Relation.DISJOINT
    if e.diff is None and band.lo > 0.0:
        return Relation.SUBSET
    return Relation.INTERSECTS


class ThreatAlgebra:
    """:class:`~threatcorr.mass.ElementAlgebra` over :class:`ThreatElement`."""

    name = "AxAxT"

    def universal(self) -> ThreatElement:
        return UNIVERSAL

    def intersect(self, e1: ThreatElement, e2: ThreatElement) -> ThreatElement:
        return intersect_elements(e1, e2)

    def is_empty(self, e: ThreatElement) -> bool:
        return e.is_empty

    def is_universal(self, e: ThreatElement) -> bool:
        return e.key() == UNIVERSAL.key()

    def key(self, e: ThreatElement):
        return e.key()

    def __repr__(self):
        return "ThreatAlgebra()"


THREAT_FRAME = ThreatAlgebra()


def hypothesis_classifier(h: Hypothesis):
    return lambda e: relation_to_hypothesis(e, h)
