"""Text and JSON rendering of a resolution run."""

from __future__ import annotations

import json
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional

from .resolver import CONFLICT_TYPES, CoarseReport, ResolutionTrace, TraceStep
from .scenario import Scenario

SCHEMA = "threatcorr-report/1"
_PASS_NAMES = {1: "I", 2: "II", 3: "III"}


def fmt3(x: float) -> str:
    """Three decimals, round-half-even on the shortest decimal repr of ``x``."""
    d = Decimal(repr(float(x))).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN)
    if d == 0:
        d = abs(d)
    return f"{d:.3f}"


def _belief_block(r: CoarseReport) -> list[str]:
    return [
        "  (U = unchanged; M = moved; D = different)",
        f"  Bel({{U}}) = {fmt3(r.bel_u)}    Pl({{U}}) = {fmt3(r.pl_u)}",
        f"  Bel({{M}}) = {fmt3(r.bel_m)}    Pl({{M}}) = {fmt3(r.pl_m)}",
        f"  Bel({{D}}) = {fmt3(r.bel_d)}    Pl({{D}}) = {fmt3(r.pl_d)}",
        f"  Uncommitted = {fmt3(r.uncommitted)}",
        f"  Conflict (mass assigned to null set) = {fmt3(r.conflict)}",
    ]


def _step_header(s: TraceStep) -> str:
    name = _PASS_NAMES[s.pass_number]
    if s.action == "test":
        return (
            f"Pass {name}: test {s.factor}/{s.test} "
            f"(benefit {fmt3(s.benefit)}, cost {fmt3(s.cost)}, benefit/cost {fmt3(s.benefit / s.cost)})"
        )
    return f"Pass {name}: {s.action}"


def _step_details(s: TraceStep, trace: bool) -> list[str]:
    out = []
    if s.action == "test":
        out.append(
            f"  outcome: present {fmt3(s.outcome.present)}, absent {fmt3(s.outcome.absent)}"
            f" -> belief present {fmt3(s.factor_belief.present)}, absent {fmt3(s.factor_belief.absent)}"
        )
    if trace or s.action != "forward chaining":
        rates = ", ".join(f"{k} {fmt3(v)}" for k, v in s.rates.items())
        out.append(f"  discount rates: {rates}")
    if trace and s.attribution is not None:
        out.append("  conflict by type:")
        for t, reasons in CONFLICT_TYPES.items():
            label = " + ".join(r.value for r in reasons)
            out.append(f"    ({t}) {fmt3(s.attribution.mass_by_type[t])}  {label}")
    return out


def render_table(
    scenario: Scenario,
    trace: ResolutionTrace,
    routes: Optional[tuple] = None,
    show_trace: bool = False,
    figures: tuple[str, ...] = (),
) -> str:
    lines = [f"Scenario: {scenario.name}", f"Threshold: {fmt3(trace.threshold)}", ""]
    lines.append("Combined Belief Function: Classification of Second Threat")
    for s in trace.steps:
        lines.append(_step_header(s))
        lines += _step_details(s, show_trace)
        lines += _belief_block(s.report)
        lines.append("")
    lines.append(f"Stopped: {trace.stop_reason}")
    lines.append(f"Final conflict = {fmt3(trace.final.conflict)}")
    if routes is not None:
        best, scores = routes
        lines.append("")
        lines.append("Route danger (worst point along route):")
        for rid, score in scores.items():
            mark = "*" if rid == best.id else " "
            lines.append(f" {mark} {rid}: {fmt3(score)}")
        lines.append(f"Selected route: {best.id}")
    for path in figures:
        lines.append(f"Figure written: {path}")
    return "\n".join(lines) + "\n"


def render_structured(
    scenario: Scenario,
    trace: ResolutionTrace,
    routes: Optional[tuple] = None,
    figures: tuple[str, ...] = (),
) -> str:
    doc = {
        "schema": SCHEMA,
        "scenario": scenario.name,
        "initial": trace.initial.as_dict(),
        "trace": trace.as_dict(),
        "routes": None,
        "figures": list(figures),
    }
    if routes is not None:
        best, scores = routes
        doc["routes"] = {"selected": best.id, "danger": scores}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
