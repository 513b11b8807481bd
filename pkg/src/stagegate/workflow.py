"""Workspace-level orchestration used by both the CLI and the HTTP service.

Ties the pure engine (scoring, planner) to the store: one active
measurement cycle per assessment, created on the initial measurement at
assessment creation and advanced through the goal/gap/plan/remeasure steps.
"""

from __future__ import annotations

from uuid import uuid4

from . import planner, scoring, store
from .errors import InvalidTransition, NotFound
from .model import MaturityModel
from .planner import ActionPlan, DeltaReport, GapReport, MeasurementCycle
from .scoring import Answer, ResponseSet, ScoreReport, ScoringPolicy, DEFAULT_POLICY


def create_assessment(ws: store.Workspace, model: MaturityModel,
                      institution: str, assessment_id: str | None = None,
                      policy: ScoringPolicy = DEFAULT_POLICY) -> tuple[str, int]:
    """Create an assessment with an empty response set and open its cycle.

    The cycle starts in the Measured state on the initial (empty,
    level-1) measurement; answers recorded afterwards feed the goal and
    gap steps. Returns (assessment id, stored version).
    """
    aid = assessment_id or uuid4().hex[:12]
    store.save_model(ws, model)
    responses = ResponseSet(assessment_id=aid, institution=institution,
                            model_id=model.model_id, model_version=model.version)
    version = store.save_assessment(ws, responses)
    initial = scoring.compute_score(model, responses, policy)
    cycle = planner.start_cycle(aid, initial)
    store.save_cycle(ws, cycle)
    return aid, version


def model_for(ws: store.Workspace, assessment_id: str) -> MaturityModel:
    meta = store.list_assessments(ws).get(assessment_id)
    if meta is None:
        raise NotFound(f"no such assessment: {assessment_id}")
    return store.load_workspace_model(ws, meta["model_id"], meta["model_version"])


def record_answer(ws: store.Workspace, assessment_id: str, answer: Answer,
                  base_version: int | None = None) -> int:
    """Validate and persist one answer; returns the new stored version."""
    model = model_for(ws, assessment_id)
    scoring.check_answer(model, answer)
    if base_version is None:
        base_version = store.latest_version(ws, assessment_id)
    responses = store.load_assessment(ws, assessment_id, base_version)
    return store.save_assessment(ws, responses.with_answer(answer), base_version)


def current_score(ws: store.Workspace, assessment_id: str,
                  policy: ScoringPolicy = DEFAULT_POLICY) -> ScoreReport:
    model = model_for(ws, assessment_id)
    responses = store.load_assessment(ws, assessment_id)
    return scoring.compute_score(model, responses, policy)


def _require_cycle(ws: store.Workspace, assessment_id: str) -> MeasurementCycle:
    cycle = store.active_cycle(ws, assessment_id)
    if cycle is None:
        raise NotFound(f"assessment {assessment_id} has no measurement cycle")
    return cycle


def set_target(ws: store.Workspace, assessment_id: str, rank: int,
               rationale: str = "") -> MeasurementCycle:
    cycle = planner.set_target(_require_cycle(ws, assessment_id), rank, rationale)
    store.save_cycle(ws, cycle)
    return cycle


def identify_gaps(ws: store.Workspace, assessment_id: str,
                  policy: ScoringPolicy = DEFAULT_POLICY) -> GapReport:
    cycle = _require_cycle(ws, assessment_id)
    model = model_for(ws, assessment_id)
    score = current_score(ws, assessment_id, policy)
    cycle, report = planner.identify_gaps(cycle, score, model)
    store.save_cycle(ws, cycle)
    return report


def gap_report(ws: store.Workspace, assessment_id: str,
               policy: ScoringPolicy = DEFAULT_POLICY) -> GapReport:
    """Recompute the gap view for the active cycle without advancing it."""
    cycle = _require_cycle(ws, assessment_id)
    if cycle.target is None:
        raise InvalidTransition("no target set for the active cycle")
    model = model_for(ws, assessment_id)
    score = current_score(ws, assessment_id, policy)
    return planner.build_gap_report(model, score, cycle.target)


def recommend_actions(ws: store.Workspace, assessment_id: str,
                      policy: ScoringPolicy = DEFAULT_POLICY) -> ActionPlan:
    cycle = _require_cycle(ws, assessment_id)
    model = model_for(ws, assessment_id)
    score = current_score(ws, assessment_id, policy)
    report = planner.build_gap_report(model, score, cycle.target) \
        if cycle.target else None
    if report is None:
        raise InvalidTransition("no target set for the active cycle")
    cycle, plan = planner.recommend_actions(cycle, report, model)
    store.save_cycle(ws, cycle)
    return plan


def remeasure(ws: store.Workspace, assessment_id: str,
              policy: ScoringPolicy = DEFAULT_POLICY,
              ) -> tuple[ScoreReport, DeltaReport]:
    """Close the active cycle on the latest answers; opens a successor."""
    cycle = _require_cycle(ws, assessment_id)
    model = model_for(ws, assessment_id)
    responses = store.load_assessment(ws, assessment_id)
    closed, score, delta, successor = planner.remeasure(cycle, model, responses, policy)
    store.save_cycle(ws, closed)
    if successor is not None:
        store.save_cycle(ws, successor)
    store.append_score(ws, score)
    return score, delta


def benchmark(ws: store.Workspace, assessment_ids: list[str],
              policy: ScoringPolicy = DEFAULT_POLICY) -> planner.BenchmarkTable:
    scores = [current_score(ws, aid, policy) for aid in assessment_ids]
    return planner.compare_assessments(scores)


def what_if(ws: store.Workspace, assessment_id: str, overrides: dict[str, Answer],
            policy: ScoringPolicy = DEFAULT_POLICY) -> ScoreReport:
    model = model_for(ws, assessment_id)
    responses = store.load_assessment(ws, assessment_id)
    return scoring.what_if(model, responses, overrides, policy)
