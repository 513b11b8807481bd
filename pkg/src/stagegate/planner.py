"""Measurement cycle: set goals, find gaps, recommend actions, remeasure.

Cycle states advance strictly in order:
Measured -> GoalsSet -> GapsIdentified -> ActionsRecommended -> Remeasured.
A closed cycle may open a successor whose initial measurement is the
remeasurement.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from uuid import uuid4

from .errors import InvalidRank, InvalidTransition, ModelMismatch
from .model import MIN_RANK, MAX_RANK, MaturityModel, SubRequirement
from .scoring import (
    Fulfillment,
    ResponseSet,
    ScoreReport,
    ScoringPolicy,
    DEFAULT_POLICY,
    NaHandling,
    compute_score,
)


class CycleState:
    MEASURED = "measured"
    GOALS_SET = "goals_set"
    GAPS_IDENTIFIED = "gaps_identified"
    ACTIONS_RECOMMENDED = "actions_recommended"
    REMEASURED = "remeasured"


_ORDER = [CycleState.MEASURED, CycleState.GOALS_SET, CycleState.GAPS_IDENTIFIED,
          CycleState.ACTIONS_RECOMMENDED, CycleState.REMEASURED]


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class Target:
    rank: int
    rationale: str
    set_at: str = field(default_factory=_now_iso)


@dataclass(frozen=True)
class HistoryEntry:
    state: str
    artifact: str
    at: str


@dataclass(frozen=True)
class MeasurementCycle:
    cycle_id: str
    assessment_id: str
    state: str
    history: tuple[HistoryEntry, ...]
    initial_score: ScoreReport
    target: Target | None = None

    def _advance(self, new_state: str, artifact: str, **changes) -> "MeasurementCycle":
        entry = HistoryEntry(state=new_state, artifact=artifact, at=_now_iso())
        return replace(self, state=new_state, history=self.history + (entry,), **changes)


@dataclass(frozen=True)
class GapItem:
    sub: SubRequirement
    status: Fulfillment
    concept_id: str


@dataclass(frozen=True)
class GapReport:
    current_level: int
    target: Target
    gaps: tuple[GapItem, ...]
    per_concept_counts: dict[str, int]
    already_met: bool


@dataclass(frozen=True)
class PlanItem:
    concept_id: str
    concept_name: str
    level: int
    objective: str
    actions: tuple[str, ...]
    gap_codes: tuple[str, ...]
    no_plan_entry: bool = False


@dataclass(frozen=True)
class ActionPlan:
    items: tuple[PlanItem, ...]
    generated_at: str


@dataclass(frozen=True)
class DeltaEntry:
    sub: SubRequirement
    before: Fulfillment
    after: Fulfillment


@dataclass(frozen=True)
class DeltaReport:
    level_before: int
    level_after: int
    transitions: tuple[DeltaEntry, ...]


@dataclass(frozen=True)
class BenchmarkRow:
    assessment_id: str
    institution: str
    overall_level: int
    per_concept_levels: dict[str, int]


@dataclass(frozen=True)
class BenchmarkTable:
    model_id: str
    model_version: str
    concept_ids: tuple[str, ...]
    rows: tuple[BenchmarkRow, ...]


# ---------------------------------------------------------------------------
# cycle operations

def start_cycle(assessment_id: str, score: ScoreReport,
                cycle_id: str | None = None) -> MeasurementCycle:
    """Open a cycle on its initial measurement (step 1)."""
    cid = cycle_id or uuid4().hex[:12]
    entry = HistoryEntry(state=CycleState.MEASURED,
                         artifact=f"initial measurement: level {score.overall_level}",
                         at=_now_iso())
    return MeasurementCycle(cycle_id=cid, assessment_id=assessment_id,
                            state=CycleState.MEASURED, history=(entry,),
                            initial_score=score)


def set_target(cycle: MeasurementCycle, rank: int, rationale: str) -> MeasurementCycle:
    """Step 2: record the goal level."""
    if not isinstance(rank, int) or not (MIN_RANK <= rank <= MAX_RANK):
        raise InvalidRank(f"target rank {rank!r} outside {MIN_RANK}..{MAX_RANK}")
    if cycle.state != CycleState.MEASURED:
        raise InvalidTransition(
            f"cannot set target in state {cycle.state!r} (expected {CycleState.MEASURED!r})")
    target = Target(rank=rank, rationale=rationale)
    return cycle._advance(CycleState.GOALS_SET, f"target: level {rank}", target=target)


def identify_gaps(cycle: MeasurementCycle, score: ScoreReport,
                  model: MaturityModel) -> tuple[MeasurementCycle, GapReport]:
    """Step 3: list unfulfilled sub-requirements up to the target rank."""
    if cycle.state != CycleState.GOALS_SET:
        raise InvalidTransition(
            f"cannot identify gaps in state {cycle.state!r} (expected {CycleState.GOALS_SET!r})")
    report = build_gap_report(model, score, cycle.target)
    advanced = cycle._advance(CycleState.GAPS_IDENTIFIED, f"gaps: {len(report.gaps)}")
    return advanced, report


def build_gap_report(model: MaturityModel, score: ScoreReport,
                     target: Target) -> GapReport:
    """Pure gap computation; usable outside a cycle (e.g. exploration)."""
    excuse = score.policy.na_handling is NaHandling.EXCUSE
    gaps: list[GapItem] = []
    counts: dict[str, int] = {}
    # fulfillment is already ordered (rank asc, concept order, indicator order)
    for sub, status in score.fulfillment.items():
        if sub.rank > target.rank:
            continue
        if status is Fulfillment.FULFILLED:
            continue
        if status is Fulfillment.NOT_APPLICABLE and excuse:
            continue
        concept_id = model.concept_of(sub.code) or "?"
        gaps.append(GapItem(sub=sub, status=status, concept_id=concept_id))
        counts[concept_id] = counts.get(concept_id, 0) + 1
    return GapReport(current_level=score.overall_level, target=target,
                     gaps=tuple(gaps), per_concept_counts=counts,
                     already_met=score.overall_level >= target.rank)


def recommend_actions(cycle: MeasurementCycle, gap: GapReport,
                      model: MaturityModel) -> tuple[MeasurementCycle, ActionPlan]:
    """Step 4: join gaps onto the improvement plan.

    A gap at rank r is answered by the plan entry for the level being left
    behind (r - 1), falling back to the nearest published lower level.
    """
    if cycle.state != CycleState.GAPS_IDENTIFIED:
        raise InvalidTransition(
            f"cannot recommend actions in state {cycle.state!r} "
            f"(expected {CycleState.GAPS_IDENTIFIED!r})")
    plan = build_action_plan(gap, model)
    advanced = cycle._advance(CycleState.ACTIONS_RECOMMENDED, f"plan items: {len(plan.items)}")
    return advanced, plan


def build_action_plan(gap: GapReport, model: MaturityModel) -> ActionPlan:
    plan_index = {(p.level, p.concept_id): p for p in model.plan}
    names = {c.id: c.name for c in model.concepts}

    def lookup(concept_id: str, rank: int):
        for level in range(rank - 1, 0, -1):
            entry = plan_index.get((level, concept_id))
            if entry is not None:
                return entry
        return None

    items: list[PlanItem] = []
    seen: dict[tuple[str, int], int] = {}  # (concept, plan level or gap rank) -> item idx
    for g in gap.gaps:
        entry = lookup(g.concept_id, g.sub.rank)
        key = (g.concept_id, entry.level if entry else -g.sub.rank)
        if key in seen:
            item = items[seen[key]]
            if g.sub.code not in item.gap_codes:
                items[seen[key]] = replace(item, gap_codes=item.gap_codes + (g.sub.code,))
            continue
        if entry is not None:
            item = PlanItem(concept_id=g.concept_id,
                            concept_name=names.get(g.concept_id, g.concept_id),
                            level=entry.level, objective=entry.objective,
                            actions=entry.actions, gap_codes=(g.sub.code,))
        else:
            item = PlanItem(concept_id=g.concept_id,
                            concept_name=names.get(g.concept_id, g.concept_id),
                            level=g.sub.rank, objective="no plan entry published",
                            actions=(), gap_codes=(g.sub.code,), no_plan_entry=True)
        seen[key] = len(items)
        items.append(item)
    return ActionPlan(items=tuple(items), generated_at=_now_iso())


def remeasure(cycle: MeasurementCycle, model: MaturityModel,
              new_responses: ResponseSet,
              policy: ScoringPolicy = DEFAULT_POLICY,
              open_successor: bool = True,
              ) -> tuple[MeasurementCycle, ScoreReport, DeltaReport, MeasurementCycle | None]:
    """Step 5: score again after acting; closes the cycle."""
    if cycle.state != CycleState.ACTIONS_RECOMMENDED:
        raise InvalidTransition(
            f"cannot remeasure in state {cycle.state!r} "
            f"(expected {CycleState.ACTIONS_RECOMMENDED!r})")
    if (new_responses.model_id, new_responses.model_version) != (model.model_id, model.version):
        raise ModelMismatch(
            f"responses reference {new_responses.model_id}@{new_responses.model_version}, "
            f"model is {model.ref}")
    new_score = compute_score(model, new_responses, policy)
    before = cycle.initial_score
    transitions = tuple(
        DeltaEntry(sub=sub, before=before.fulfillment[sub], after=status)
        for sub, status in new_score.fulfillment.items()
        if before.fulfillment.get(sub) != status
    )
    delta = DeltaReport(level_before=before.overall_level,
                        level_after=new_score.overall_level,
                        transitions=transitions)
    closed = cycle._advance(CycleState.REMEASURED,
                            f"remeasurement: level {new_score.overall_level}")
    successor = start_cycle(cycle.assessment_id, new_score) if open_successor else None
    return closed, new_score, delta, successor


def compare_assessments(scores: list[ScoreReport]) -> BenchmarkTable:
    """Benchmark table across institutions; requires one common model."""
    if not scores:
        raise ValueError("at least one score is required")
    ref = (scores[0].model_id, scores[0].model_version)
    for s in scores[1:]:
        if (s.model_id, s.model_version) != ref:
            raise ModelMismatch(
                f"cannot benchmark across model versions "
                f"({s.model_id}@{s.model_version} vs {ref[0]}@{ref[1]})")
    concept_ids = tuple(scores[0].per_concept_levels)
    rows = sorted(
        (BenchmarkRow(assessment_id=s.assessment_id, institution=s.institution,
                      overall_level=s.overall_level,
                      per_concept_levels=dict(s.per_concept_levels))
         for s in scores),
        key=lambda r: (-r.overall_level, r.institution),
    )
    return BenchmarkTable(model_id=ref[0], model_version=ref[1],
                          concept_ids=concept_ids, rows=tuple(rows))


def render_benchmark(table: BenchmarkTable) -> str:
    """Aligned plain-text rendering for terminal output."""
    headers = ["institution", "level", *table.concept_ids]
    rows = [[r.institution, str(r.overall_level),
             *(str(r.per_concept_levels.get(c, "-")) for c in table.concept_ids)]
            for r in table.rows]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)


__all__ = [
    "CycleState", "Target", "HistoryEntry", "MeasurementCycle",
    "GapItem", "GapReport", "PlanItem", "ActionPlan",
    "DeltaEntry", "DeltaReport", "BenchmarkRow", "BenchmarkTable",
    "start_cycle", "set_target", "identify_gaps", "build_gap_report",
    "recommend_actions", "build_action_plan", "remeasure",
    "compare_assessments", "render_benchmark",
]
