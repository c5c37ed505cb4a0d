"""Route choice from a plausibility-weighted danger field.

Danger at a point is the plausibility that a threat sits within the lethal
radius, summed over the two localizations.  The first localization counts
insofar as the threat may still be there (U or M); the second insofar as it
is a moved or a different threat (M or D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .evidence import LOCATION1, LOCATION2, Argument
from .frame import Disc, Point
from .resolver import CoarseReport


class NoCandidates(ValueError):
    pass


@dataclass(frozen=True)
class Route:
    id: str
    waypoints: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.waypoints)
        if len(pts) < 2:
            raise ValueError(f"route {self.id!r} needs at least two waypoints")
        if any(a == b for a, b in zip(pts, pts[1:])):
            raise ValueError(f"route {self.id!r} repeats a waypoint")
        object.__setattr__(self, "waypoints", pts)

    @property
    def length(self) -> float:
        return math.fsum(math.dist(a, b) for a, b in zip(self.waypoints, self.waypoints[1:]))

    def samples(self, step: float) -> np.ndarray:
        """Points every ``step`` of arc length, both endpoints included."""
        out = []
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            n = max(1, math.ceil(math.dist(a, b) / step))
            t = np.arange(n) / n
            out.append(np.outer(1 - t, a) + np.outer(t, b))
        out.append(np.array([self.waypoints[-1]]))
        return np.vstack(out)


@dataclass(frozen=True)
class DangerModel:
    lethal_radius: float = 10.0
    sample_step: float = 1.0

    def __post_init__(self):
        if not (self.lethal_radius > 0 and self.sample_step > 0):
            raise ValueError("lethal radius and sample step must be positive")


def _location_discs(argument: Argument) -> list[tuple[Disc, float]]:
    out = []
    for e, m in argument.discounted().entries:
        pc = e.same
        disc = pc.disc1 if argument.role == LOCATION1 else pc.disc2
        out.append((disc, m))
    return out


def _plausibility_within(discs: list[tuple[Disc, float]], point: Point, radius: float) -> float:
    total = 0.0
    for disc, m in discs:
        if disc.is_full or math.dist(disc.center, point) <= disc.radius + radius:
            total += m
    return total


def _weights(coarse: CoarseReport) -> dict[str, float]:
    return {LOCATION1: coarse.pl_u + coarse.pl_m, LOCATION2: coarse.pl_m + coarse.pl_d}


def danger_at(point: Point, arguments: Sequence[Argument], coarse: CoarseReport, model: DangerModel) -> float:
    weights = _weights(coarse)
    total = 0.0
    for a in arguments:
        if a.role in weights:
            total += weights[a.role] * _plausibility_within(_location_discs(a), point, model.lethal_radius)
    return total


def route_danger(route: Route, arguments: Sequence[Argument], coarse: CoarseReport, model: DangerModel) -> float:
    """Worst danger met anywhere along the route."""
    pts = route.samples(model.sample_step)
    weights = _weights(coarse)
    danger = np.zeros(len(pts))
    for a in arguments:
        if a.role not in weights:
            continue
        for disc, m in _location_discs(a):
            if disc.is_full:
                danger += weights[a.role] * m
                continue
            d = np.hypot(pts[:, 0] - disc.center[0], pts[:, 1] - disc.center[1])
            danger += np.where(d <= disc.radius + model.lethal_radius, weights[a.role] * m, 0.0)
    return float(danger.max())


def select_route(
    candidates: Sequence[Route], arguments: Sequence[Argument], coarse: CoarseReport, model: DangerModel
) -> tuple[Route, dict[str, float]]:
    """Least dangerous route, ties going to the shorter one and then to the lower id."""
    if not candidates:
        raise NoCandidates("no candidate routes")
    scores = {r.id: route_danger(r, arguments, coarse, model) for r in candidates}
    best = min(candidates, key=lambda r: (round(scores[r.id], 12), round(r.length, 9), r.id))
    return best, scores
