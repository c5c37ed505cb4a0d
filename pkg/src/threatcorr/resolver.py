"""Conflict measurement, attribution and non-monotonic resolution.

Pass I combines every argument with Dempster's rule.  When the conflict is
above the threshold, pass II repeatedly picks the discrediting-factor test
with the best potential conflict reduction per unit cost, applies its
outcome and recombines.  When no test is worth running, pass III discounts
all arguments in proportion to their share of the conflict.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

from .evidence import COVERAGE, LOCATION1, LOCATION2, MOVEMENT, ROLES, SEPARATION, Argument
from .frame import (
    FULL,
    THREAT_FRAME,
    UNIVERSAL,
    Hypothesis,
    feasible_distance_interval,
    hypothesis_classifier,
)
from .mass import (
    MASS_TOL,
    FiniteAlgebra,
    MassFunction,
    TotalConflict,
    bel,
    combine_all,
    conflict_of,
    discount,
    normalize,
    pl,
    vacuous,
)

DEFAULT_THRESHOLD = 0.25
LAMBDA_TOL = 1e-6

PRESENCE_FRAME = FiniteAlgebra(("present", "absent"), name="presence")
_PRESENT = PRESENCE_FRAME.element("present")
_ABSENT = PRESENCE_FRAME.element("absent")


class UnattributedConflict(RuntimeError):
    """A null product matched none of the six conflict types."""


class AlreadyPerformed(ValueError):
    pass


# ---------------------------------------------------------------------------
# coarse report


@dataclass(frozen=True)
class CoarseReport:
    bel_u: float
    pl_u: float
    bel_m: float
    pl_m: float
    bel_d: float
    pl_d: float
    conflict: float

    @property
    def uncommitted(self) -> float:
        return 1.0 - (self.bel_u + self.bel_m + self.bel_d)

    def as_dict(self) -> dict:
        return {
            "bel_U": self.bel_u,
            "pl_U": self.pl_u,
            "bel_M": self.bel_m,
            "pl_M": self.pl_m,
            "bel_D": self.bel_d,
            "pl_D": self.pl_d,
            "conflict": self.conflict,
            "uncommitted": self.uncommitted,
        }


def effective_masses(arguments: Sequence[Argument]) -> list[MassFunction]:
    return [a.discounted() for a in arguments]


def coarse_report(arguments: Sequence[Argument]) -> CoarseReport:
    """Combine the (discounted) arguments and read off belief in U, M and D."""
    result = combine_all(effective_masses(arguments))
    m = normalize(result)
    vals = []
    for h in (Hypothesis.UNCHANGED, Hypothesis.MOVED, Hypothesis.DIFFERENT):
        classify = hypothesis_classifier(h)
        vals += [bel(m, classify), pl(m, classify)]
    return CoarseReport(*vals, conflict=result.null_mass)


def total_conflict(arguments: Sequence[Argument]) -> float:
    return conflict_of(effective_masses(arguments))


# ---------------------------------------------------------------------------
# conflict attribution


class Reason(enum.Enum):
    CONTOUR_NON_OVERLAP = "contour non-overlap"
    DISTANCE_PRECLUDES_MOVEMENT = "distance precludes movement"
    EVIDENCE_FOR_MOVEMENT = "evidence for movement (if same threat)"
    EVIDENCE_AGAINST_MOVEMENT = "evidence against movement"
    DISTANCE_PRECLUDES_DIFFERENT = "distance precludes different"
    COVERAGE_GOOD = "coverage good"


CONFLICT_TYPES: dict[int, tuple[Reason, Reason, Reason]] = {
    1: (Reason.CONTOUR_NON_OVERLAP, Reason.EVIDENCE_AGAINST_MOVEMENT, Reason.DISTANCE_PRECLUDES_DIFFERENT),
    2: (Reason.CONTOUR_NON_OVERLAP, Reason.EVIDENCE_AGAINST_MOVEMENT, Reason.COVERAGE_GOOD),
    3: (Reason.EVIDENCE_FOR_MOVEMENT, Reason.DISTANCE_PRECLUDES_MOVEMENT, Reason.DISTANCE_PRECLUDES_DIFFERENT),
    4: (Reason.CONTOUR_NON_OVERLAP, Reason.DISTANCE_PRECLUDES_MOVEMENT, Reason.DISTANCE_PRECLUDES_DIFFERENT),
    5: (Reason.EVIDENCE_FOR_MOVEMENT, Reason.DISTANCE_PRECLUDES_MOVEMENT, Reason.COVERAGE_GOOD),
    6: (Reason.CONTOUR_NON_OVERLAP, Reason.DISTANCE_PRECLUDES_MOVEMENT, Reason.COVERAGE_GOOD),
}
_TYPE_OF = {reasons: t for t, reasons in CONFLICT_TYPES.items()}


@dataclass(frozen=True)
class ConflictAttribution:
    mass_by_type: Mapping[int, float]

    @property
    def total(self) -> float:
        return math.fsum(self.mass_by_type.values())

    def mass_by_reason(self) -> dict[Reason, float]:
        out = {r: 0.0 for r in Reason}
        for t, mass in self.mass_by_type.items():
            for r in CONFLICT_TYPES[t]:
                out[r] += mass
        return out

    def as_dict(self) -> dict:
        return {str(t): self.mass_by_type[t] for t in sorted(self.mass_by_type)}


def classify_null_product(elements: Mapping[str, object]) -> int:
    """Conflict type (1-6) of a product of focal elements, keyed by role.

    Each type is one reason against each hypothesis.  Against U: the location
    contours cannot overlap, else the movement band excludes zero.  Against M:
    the movement element is the diagonal, else the band misses every feasible
    distance.  Against D: the separation floor exceeds every feasible
    distance, else coverage rules out a second threat.  Where two reasons
    hold at once the geometric one is reported.
    """
    disc1 = elements[LOCATION1].same.disc1 if LOCATION1 in elements else FULL
    disc2 = elements[LOCATION2].same.disc2 if LOCATION2 in elements else FULL
    feasible = feasible_distance_interval(disc1, disc2)
    move = elements.get(MOVEMENT, UNIVERSAL).same
    sep = elements.get(SEPARATION, UNIVERSAL).diff
    cov = elements.get(COVERAGE, UNIVERSAL)

    if sep.band.lo > feasible.hi:
        against_d = Reason.DISTANCE_PRECLUDES_DIFFERENT
    elif cov.diff is None:
        against_d = Reason.COVERAGE_GOOD
    else:
        raise UnattributedConflict("different-threat slice survives")

    band = move.band
    if band.hi == 0.0:
        if feasible.lo <= 0.0:
            raise UnattributedConflict("unchanged hypothesis survives")
        against_u, against_m = Reason.CONTOUR_NON_OVERLAP, Reason.EVIDENCE_AGAINST_MOVEMENT
    else:
        if band.lo <= feasible.hi and feasible.lo <= band.hi:
            raise UnattributedConflict("same-threat slice survives")
        against_m = Reason.DISTANCE_PRECLUDES_MOVEMENT
        if feasible.lo > 0.0:
            against_u = Reason.CONTOUR_NON_OVERLAP
        elif band.lo > 0.0:
            against_u = Reason.EVIDENCE_FOR_MOVEMENT
        else:
            raise UnattributedConflict("no evidence against the unchanged hypothesis")
    return _TYPE_OF[(against_u, against_m, against_d)]


def attribute_conflict(arguments: Sequence[Argument]) -> ConflictAttribution:
    """Split total conflict into the six conflict types.

    Enumerates every product of focal elements across the arguments; products
    whose intersection is empty are classified with
    :func:`classify_null_product`.
    """
    by_role = {}
    for a in arguments:
        if a.role not in ROLES or a.role in by_role:
            raise UnattributedConflict(f"argument {a.id!r} has no distinct threat-scenario role")
        by_role[a.role] = a
    roles = list(by_role)
    tables = [by_role[r].discounted().entries for r in roles]
    masses = {t: 0.0 for t in CONFLICT_TYPES}
    for combo in itertools.product(*tables):
        meet = combo[0][0]
        weight = combo[0][1]
        for e, m in combo[1:]:
            meet = THREAT_FRAME.intersect(meet, e)
            weight *= m
        if not meet.is_empty:
            continue
        t = classify_null_product({r: e for r, (e, _) in zip(roles, combo)})
        masses[t] += weight
    return ConflictAttribution(masses)


# ---------------------------------------------------------------------------
# discrediting factors


@dataclass(frozen=True)
class PresenceBelief:
    """Masses over {present, absent}; the remainder is uncommitted."""

    present: float = 0.0
    absent: float = 0.0

    def __post_init__(self):
        if self.present < 0 or self.absent < 0 or self.present + self.absent > 1.0 + MASS_TOL:
            raise ValueError(f"invalid presence belief {self}")

    @property
    def uncommitted(self) -> float:
        return max(0.0, 1.0 - self.present - self.absent)

    def to_mass(self) -> MassFunction:
        pairs = [(_PRESENT, self.present), (_ABSENT, self.absent), (PRESENCE_FRAME.universal(), self.uncommitted)]
        return MassFunction(PRESENCE_FRAME, [(e, m) for e, m in pairs if m > 0.0])

    @classmethod
    def from_mass(cls, m: MassFunction) -> "PresenceBelief":
        return cls(present=m.mass_of(_PRESENT), absent=m.mass_of(_ABSENT))

    def combine(self, other: "PresenceBelief") -> "PresenceBelief":
        return PresenceBelief.from_mass(normalize(combine_all([self.to_mass(), other.to_mass()])))

    def as_dict(self) -> dict:
        return {"present": self.present, "absent": self.absent}


VACUOUS_PRESENCE = PresenceBelief()


@dataclass(frozen=True)
class PresenceTest:
    """An information search with a cost and the beliefs it can return."""

    id: str
    cost: float
    outcomes: tuple[PresenceBelief, ...]
    scripted: PresenceBelief

    def __post_init__(self):
        if not self.cost > 0:
            raise ValueError(f"test {self.id!r}: cost must be positive")
        if self.scripted not in self.outcomes:
            raise ValueError(f"test {self.id!r}: scripted outcome is not a possible outcome")


@dataclass(frozen=True)
class DiscreditingFactor:
    id: str
    target: str
    belief: PresenceBelief = VACUOUS_PRESENCE
    tests: tuple[PresenceTest, ...] = ()
    performed: frozenset = frozenset()
    description: str = ""

    def test(self, test_id: str) -> PresenceTest:
        for t in self.tests:
            if t.id == test_id:
                return t
        raise KeyError(test_id)


def discount_rate_from(b: PresenceBelief) -> float:
    # uncommitted belief defaults to absence, so only presence discounts
    return b.present


def factor_rate(argument_id: str, factors: Sequence[DiscreditingFactor]) -> float:
    """Rate at which an argument is discounted: belief that any of its factors is present."""
    keep = 1.0
    for f in factors:
        if f.target == argument_id:
            keep *= 1.0 - discount_rate_from(f.belief)
    return 1.0 - keep


def apply_factor_rates(arguments: Sequence[Argument], factors: Sequence[DiscreditingFactor]) -> list[Argument]:
    return [a.with_rate(factor_rate(a.id, factors)) if any(f.target == a.id for f in factors) else a for a in arguments]


def _index(arguments: Sequence[Argument], argument_id: str) -> int:
    for i, a in enumerate(arguments):
        if a.id == argument_id:
            return i
    raise KeyError(argument_id)


def conflict_slope(arguments: Sequence[Argument], target: str) -> float:
    """Change in conflict when the target goes from its current state to vacuous.

    Conflict is affine in any one argument's discount rate, so this is the
    slope with respect to a further discount applied on top of the current one.
    """
    i = _index(arguments, target)
    masses = effective_masses(arguments)
    base = conflict_of(masses)
    masses[i] = vacuous(masses[i].algebra)
    return conflict_of(masses) - base


def potential_benefit(
    factor: DiscreditingFactor,
    test: PresenceTest,
    arguments: Sequence[Argument],
    factors: Sequence[DiscreditingFactor] = (),
) -> float:
    """Largest conflict reduction any outcome of ``test`` could produce."""
    if test.id in factor.performed:
        raise AlreadyPerformed(f"{factor.id}/{test.id}")
    others = [f for f in factors if f.id != factor.id]
    current = factor_rate(factor.target, [factor, *others])
    best = current
    for outcome in test.outcomes:
        try:
            updated = factor.belief.combine(outcome)
        except TotalConflict:
            continue
        best = max(best, factor_rate(factor.target, [replace(factor, belief=updated), *others]))
    if best <= current or current >= 1.0:
        return 0.0
    slope = conflict_slope(arguments, factor.target)
    return max(0.0, -slope * (best - current) / (1.0 - current))


@dataclass(frozen=True)
class SelectedTest:
    factor: DiscreditingFactor
    test: PresenceTest
    benefit: float

    @property
    def ratio(self) -> float:
        return self.benefit / self.test.cost


def select_test(
    factors: Sequence[DiscreditingFactor],
    arguments: Sequence[Argument],
    min_ratio: float = 0.0,
) -> Optional[SelectedTest]:
    """Unperformed test with the highest benefit per unit cost, or None."""
    best = None
    best_key = None
    for f in factors:
        for t in f.tests:
            if t.id in f.performed:
                continue
            benefit = potential_benefit(f, t, arguments, factors)
            if benefit <= 0.0:
                continue
            choice = SelectedTest(f, t, benefit)
            key = (-round(choice.ratio, 12), t.cost, t.id)
            if best_key is None or key < best_key:
                best, best_key = choice, key
    if best is None or best.ratio < min_ratio:
        return None
    return best


def apply_outcome(factor: DiscreditingFactor, test_id: str) -> tuple[DiscreditingFactor, float]:
    """Run a test with its scripted outcome; return the updated factor and its rate."""
    if test_id in factor.performed:
        raise AlreadyPerformed(f"{factor.id}/{test_id}")
    t = factor.test(test_id)
    updated = replace(factor, belief=factor.belief.combine(t.scripted), performed=factor.performed | {test_id})
    return updated, discount_rate_from(updated.belief)


# ---------------------------------------------------------------------------
# across-the-board discounting


def conflict_contributions(arguments: Sequence[Argument]) -> dict[str, float]:
    """Conflict each argument is responsible for at the margin."""
    return {a.id: max(0.0, -conflict_slope(arguments, a.id)) for a in arguments}


def _compose(rate: float, extra: float) -> float:
    return 1.0 - (1.0 - rate) * (1.0 - extra)


def global_discount(arguments: Sequence[Argument], tau: float) -> dict[str, float]:
    """Discount every argument in proportion to its conflict contribution.

    Returns the new absolute discount rate of each argument.  The common
    scale is the smallest (to 1e-6) that brings conflict down to ``tau``.
    """
    current = {a.id: a.discount_rate for a in arguments}
    if total_conflict(arguments) <= tau:
        return current
    contrib = conflict_contributions(arguments)
    weights = {a.id: contrib[a.id] * a.discount_weight for a in arguments}
    top = max(weights.values())
    if top <= 0.0:
        weights = {k: 1.0 for k in weights}
        top = 1.0
    share = {k: w / top for k, w in weights.items()}

    def rates_at(lam: float) -> dict[str, float]:
        return {a.id: _compose(a.discount_rate, lam * share[a.id]) for a in arguments}

    def conflict_at(lam: float) -> float:
        r = rates_at(lam)
        return conflict_of([discount(a.mass, r[a.id]) for a in arguments])

    if conflict_at(1.0) > tau:
        return {a.id: 1.0 for a in arguments}
    lo, hi = 0.0, 1.0
    while hi - lo > LAMBDA_TOL:
        mid = 0.5 * (lo + hi)
        if conflict_at(mid) <= tau:
            hi = mid
        else:
            lo = mid
    return rates_at(hi)


# ---------------------------------------------------------------------------
# the resolution loop


@dataclass(frozen=True)
class TraceStep:
    pass_number: int
    action: str
    report: CoarseReport
    rates: Mapping[str, float]
    attribution: Optional[ConflictAttribution] = None
    factor: Optional[str] = None
    test: Optional[str] = None
    benefit: Optional[float] = None
    cost: Optional[float] = None
    outcome: Optional[PresenceBelief] = None
    factor_belief: Optional[PresenceBelief] = None

    @property
    def conflict(self) -> float:
        return self.report.conflict

    def as_dict(self) -> dict:
        return {
            "pass": self.pass_number,
            "action": self.action,
            "conflict": self.report.conflict,
            "report": self.report.as_dict(),
            "rates": dict(self.rates),
            "attribution": None if self.attribution is None else self.attribution.as_dict(),
            "factor": self.factor,
            "test": self.test,
            "benefit": self.benefit,
            "cost": self.cost,
            "outcome": None if self.outcome is None else self.outcome.as_dict(),
            "factor_belief": None if self.factor_belief is None else self.factor_belief.as_dict(),
        }


@dataclass(frozen=True)
class ResolutionTrace:
    steps: tuple[TraceStep, ...]
    arguments: tuple[Argument, ...]
    factors: tuple[DiscreditingFactor, ...]
    threshold: float
    stop_reason: str

    @property
    def initial(self) -> CoarseReport:
        return self.steps[0].report

    @property
    def final(self) -> CoarseReport:
        return self.steps[-1].report

    @property
    def passes(self) -> tuple[int, ...]:
        return tuple(sorted({s.pass_number for s in self.steps}))

    def as_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "stop_reason": self.stop_reason,
            "steps": [s.as_dict() for s in self.steps],
            "final": self.final.as_dict(),
        }


def _try_attribution(arguments) -> Optional[ConflictAttribution]:
    if sorted(a.role or "" for a in arguments) != sorted(ROLES):
        return None
    return attribute_conflict(arguments)


def resolve(
    arguments: Sequence[Argument],
    factors: Sequence[DiscreditingFactor] = (),
    tau: float = DEFAULT_THRESHOLD,
    min_ratio: float = 0.0,
    run_tests: bool = True,
) -> ResolutionTrace:
    """Run passes I-III until conflict is at most ``tau``."""
    factors = list(factors)
    ids = {a.id for a in arguments}
    for f in factors:
        if f.target not in ids:
            raise KeyError(f"factor {f.id!r} targets unknown argument {f.target!r}")
    arguments = apply_factor_rates(arguments, factors)

    def step(pass_number, action, **kw):
        return TraceStep(
            pass_number,
            action,
            coarse_report(arguments),
            {a.id: a.discount_rate for a in arguments},
            attribution=_try_attribution(arguments),
            **kw,
        )

    steps = [step(1, "forward chaining")]
    stop = "conflict below threshold"
    while steps[-1].conflict > tau:
        choice = select_test(factors, arguments, min_ratio) if run_tests else None
        if choice is None:
            rates = global_discount(arguments, tau)
            arguments = [a.with_rate(rates[a.id]) for a in arguments]
            steps.append(step(3, "across-the-board discounting"))
            stop = "across-the-board discounting"
            break
        updated, _ = apply_outcome(choice.factor, choice.test.id)
        factors = [updated if f.id == updated.id else f for f in factors]
        arguments = apply_factor_rates(arguments, factors)
        steps.append(
            step(
                2,
                "test",
                factor=updated.id,
                test=choice.test.id,
                benefit=choice.benefit,
                cost=choice.test.cost,
                outcome=choice.test.scripted,
                factor_belief=updated.belief,
            )
        )
    return ResolutionTrace(tuple(steps), tuple(arguments), tuple(factors), tau, stop)
