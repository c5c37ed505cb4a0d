"""Frame-generic Dempster-Shafer kernel.

Mass functions are immutable tuples of ``(element, mass)`` pairs over an
:class:`ElementAlgebra`, which supplies the set operations.  Combination
keeps products unnormalized so that the mass routed to the empty set is
reported as conflict; :func:`normalize` performs the Dempster division.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Protocol, Sequence

MASS_TOL = 1e-9
DROP_TOL = 1e-12
TOTAL_CONFLICT_TOL = 1e-12


class TotalConflict(ArithmeticError):
    """Raised when all mass lands on the empty set and normalization is undefined."""


class Relation(enum.Enum):
    SUBSET = "subset"
    INTERSECTS = "intersects"
    DISJOINT = "disjoint"


class ElementAlgebra(Protocol):
    """Set operations a frame must provide for its focal elements."""

    name: str

    def universal(self): ...

    def intersect(self, e1, e2): ...

    def is_empty(self, e) -> bool: ...

    def is_universal(self, e) -> bool: ...

    def key(self, e) -> Hashable: ...


class FiniteAlgebra:
    """Subsets of a small finite frame, stored as frozensets of atoms."""

    def __init__(self, atoms: Iterable[Hashable], name: str = "finite"):
        self.atoms = frozenset(atoms)
        self.name = name

    def universal(self) -> frozenset:
        return self.atoms

    def intersect(self, e1: frozenset, e2: frozenset) -> frozenset:
        return e1 & e2

    def is_empty(self, e: frozenset) -> bool:
        return not e

    def is_universal(self, e: frozenset) -> bool:
        return e == self.atoms

    def key(self, e: frozenset) -> Hashable:
        return e

    def element(self, *atoms) -> frozenset:
        e = frozenset(atoms)
        if not e <= self.atoms:
            raise ValueError(f"atoms {sorted(map(str, e - self.atoms))} not in frame {self.name}")
        return e

    def __repr__(self):
        return f"FiniteAlgebra({sorted(map(str, self.atoms))!r}, name={self.name!r})"


def _merge(algebra, pairs: Iterable[tuple[object, float]]) -> list[tuple[object, float]]:
    # insertion-ordered dict keeps the result deterministic
    merged: dict[Hashable, list] = {}
    for element, mass in pairs:
        k = algebra.key(element)
        slot = merged.get(k)
        if slot is None:
            merged[k] = [element, mass]
        else:
            slot[1] += mass
    return [(e, m) for e, m in merged.values()]


@dataclass(frozen=True)
class MassFunction:
    """A normalized basic probability assignment.

    Entries are deduplicated by the algebra's canonical key on construction;
    masses must be positive and sum to one.
    """

    algebra: ElementAlgebra
    entries: tuple[tuple[object, float], ...]

    def __init__(self, algebra: ElementAlgebra, entries: Iterable[tuple[object, float]]):
        pairs = [(e, float(m)) for e, m in entries]
        for element, mass in pairs:
            if not (mass > 0.0) or math.isnan(mass):
                raise ValueError(f"mass must be strictly positive, got {mass!r}")
            if algebra.is_empty(element):
                raise ValueError("the empty set cannot be a focal element")
        merged = _merge(algebra, pairs)
        total = math.fsum(m for _, m in merged)
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {total!r}, expected 1")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "entries", tuple(merged))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def mass_of(self, element) -> float:
        k = self.algebra.key(element)
        return math.fsum(m for e, m in self.entries if self.algebra.key(e) == k)

    def as_dict(self) -> dict[Hashable, float]:
        return {self.algebra.key(e): m for e, m in self.entries}

    def is_vacuous(self) -> bool:
        return len(self.entries) == 1 and self.algebra.is_universal(self.entries[0][0])


@dataclass(frozen=True)
class CombinationResult:
    """Unnormalized product of several mass functions plus the conflict."""

    algebra: ElementAlgebra
    entries: tuple[tuple[object, float], ...]
    null_mass: float

    @property
    def conflict(self) -> float:
        return self.null_mass


def vacuous(algebra: ElementAlgebra) -> MassFunction:
    return MassFunction(algebra, [(algebra.universal(), 1.0)])


def _check_frames(ms: Sequence[MassFunction]) -> ElementAlgebra:
    algebra = ms[0].algebra
    for m in ms[1:]:
        if m.algebra is not algebra:
            raise ValueError("mass functions are defined over different frames")
    return algebra


def _product(algebra, entries, null_mass, m: MassFunction):
    routed = []
    for e1, m1 in entries:
        for e2, m2 in m.entries:
            meet = algebra.intersect(e1, e2)
            if algebra.is_empty(meet):
                null_mass += m1 * m2
            else:
                routed.append((meet, m1 * m2))
    return _merge(algebra, routed), null_mass


def _finish(algebra, entries, null_mass) -> CombinationResult:
    if null_mass >= 1.0 - TOTAL_CONFLICT_TOL:
        raise TotalConflict(f"combined mass on the empty set is {null_mass!r}")
    return CombinationResult(algebra, tuple((e, m) for e, m in entries), null_mass)


def combine(m1: MassFunction, m2: MassFunction) -> CombinationResult:
    """Dempster product of two mass functions, unnormalized."""
    algebra = _check_frames([m1, m2])
    entries, null_mass = _product(algebra, m1.entries, 0.0, m2)
    return _finish(algebra, entries, null_mass)


def _fold(ms: Sequence[MassFunction]):
    if not ms:
        raise ValueError("combine_all needs at least one mass function")
    algebra = _check_frames(ms)
    entries, null_mass = list(ms[0].entries), 0.0
    for m in ms[1:]:
        entries, null_mass = _product(algebra, entries, null_mass, m)
    return algebra, entries, null_mass


def combine_all(ms: Sequence[MassFunction]) -> CombinationResult:
    """Fold :func:`combine` over ``ms`` with normalization deferred to the end.

    The returned ``null_mass`` is the total conflict among all inputs.
    """
    return _finish(*_fold(ms))


def normalize(result: CombinationResult) -> MassFunction:
    k = 1.0 - result.null_mass
    if k <= TOTAL_CONFLICT_TOL:
        raise TotalConflict("cannot normalize a totally conflicting combination")
    return MassFunction(
        result.algebra, [(e, m / k) for e, m in result.entries if m / k >= DROP_TOL]
    )


def dempster(ms: Sequence[MassFunction]) -> MassFunction:
    """Combine and normalize in one step."""
    return normalize(combine_all(ms))


def discount(m: MassFunction, rate: float) -> MassFunction:
    """Scale focal masses by ``1 - rate`` and move ``rate`` onto the universal set."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"discount rate must lie in [0, 1], got {rate!r}")
    if rate == 0.0:
        return m
    algebra = m.algebra
    keep = 1.0 - rate
    pairs = []
    universal_mass = rate
    for e, mass in m.entries:
        if algebra.is_universal(e):
            universal_mass += keep * mass
        elif keep * mass >= DROP_TOL:
            pairs.append((e, keep * mass))
    pairs.append((algebra.universal(), universal_mass))
    return MassFunction(algebra, pairs)


Classifier = Callable[[object], Relation]


def bel(m: MassFunction | CombinationResult, classify: Classifier) -> float:
    """Total mass of focal elements the classifier places inside the target."""
    return math.fsum(mass for e, mass in m.entries if classify(e) is Relation.SUBSET)


def pl(m: MassFunction | CombinationResult, classify: Classifier) -> float:
    """Total mass of focal elements that meet the target."""
    return math.fsum(mass for e, mass in m.entries if classify(e) is not Relation.DISJOINT)


def subset_classifier(algebra: FiniteAlgebra, target: Iterable) -> Classifier:
    """Classifier for an explicit subset of a finite frame."""
    t = frozenset(target)

    def classify(e: frozenset) -> Relation:
        if e <= t:
            return Relation.SUBSET
        if e & t:
            return Relation.INTERSECTS
        return Relation.DISJOINT

    return classify


def conflict_of(ms: Sequence[MassFunction]) -> float:
    """Total conflict among ``ms``; never raises on total contradiction."""
    return _fold(ms)[2]


__all__ = [
    "CombinationResult",
    "ElementAlgebra",
    "FiniteAlgebra",
    "MassFunction",
    "Relation",
    "TotalConflict",
    "bel",
    "combine",
    "combine_all",
    "conflict_of",
    "dempster",
    "discount",
    "normalize",
    "pl",
    "subset_classifier",
    "vacuous",
]
