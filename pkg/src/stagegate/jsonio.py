"""Stable JSON shapes for every report and record the engine emits.

Key names and value encodings here are the wire/file contract: ranks are
integers, statuses and enums are lowercase strings, timestamps are
ISO-8601 UTC strings.
"""

from __future__ import annotations

from typing import Any

from .errors import SchemaError
from .model import SubRequirement
from .planner import (
    ActionPlan,
    BenchmarkRow,
    BenchmarkTable,
    DeltaEntry,
    DeltaReport,
    GapItem,
    GapReport,
    HistoryEntry,
    MeasurementCycle,
    PlanItem,
    Target,
)
from .scoring import (
    Answer,
    Degree,
    Fulfillment,
    NaHandling,
    NotApplicable,
    ResponseSet,
    ScoreReport,
    ScoringPolicy,
)


# --- answers / response sets ----------------------------------------------

def answer_value_to_json(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, Degree):
        return value.name.lower()
    if isinstance(value, NotApplicable):
        return {"na": value.justification}
    raise TypeError(f"unsupported answer value: {value!r}")


def answer_value_from_json(raw: Any) -> Any:
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, str):
        try:
            return Degree[raw.upper()]
        except KeyError:
            raise SchemaError(f"invalid degree value {raw!r}")
    if isinstance(raw, dict) and set(raw) == {"na"}:
        return NotApplicable(justification=raw["na"])
    raise SchemaError(f"invalid answer value {raw!r}")


def answer_to_dict(a: Answer) -> dict:
    return {
        "indicator_code": a.indicator_code,
        "value": answer_value_to_json(a.value),
        "answered_at": a.answered_at,
    }


def answer_from_dict(d: dict) -> Answer:
    return Answer(indicator_code=d["indicator_code"],
                  value=answer_value_from_json(d["value"]),
                  answered_at=d["answered_at"])


def responses_to_dict(rs: ResponseSet) -> dict:
    return {
        "assessment_id": rs.assessment_id,
        "institution": rs.institution,
        "model_id": rs.model_id,
        "model_version": rs.model_version,
        "answers": {code: answer_to_dict(a) for code, a in rs.answers.items()},
    }


def responses_from_dict(d: dict) -> ResponseSet:
    return ResponseSet(
        assessment_id=d["assessment_id"],
        institution=d["institution"],
        model_id=d["model_id"],
        model_version=d["model_version"],
        answers={code: answer_from_dict(a) for code, a in d["answers"].items()},
    )


# --- policies and score reports -------------------------------------------

def policy_to_dict(p: ScoringPolicy) -> dict:
    return {
        "na_handling": p.na_handling.value,
        "degree_thresholds": [t.name.lower() for t in p.degree_thresholds],
    }


def policy_from_dict(d: dict) -> ScoringPolicy:
    return ScoringPolicy(
        na_handling=NaHandling(d["na_handling"]),
        degree_thresholds=tuple(Degree[t.upper()] for t in d["degree_thresholds"]),
    )


def _sub_key(sub: SubRequirement) -> str:
    return f"{sub.code}@{sub.rank}"


def _sub_from_key(key: str) -> SubRequirement:
    code, _, rank = key.rpartition("@")
    return SubRequirement(code=code, rank=int(rank))


def score_to_dict(r: ScoreReport) -> dict:
    return {
        "assessment_id": r.assessment_id,
        "institution": r.institution,
        "model_id": r.model_id,
        "model_version": r.model_version,
        "overall_level": r.overall_level,
        "per_concept_levels": dict(r.per_concept_levels),
        "vacuous_concepts": sorted(r.vacuous_concepts),
        "fulfillment": {_sub_key(s): st.value for s, st in r.fulfillment.items()},
        "criteria_rollup": {c.value: {"fulfilled": f, "total": t}
                            for c, (f, t) in r.criteria_rollup.items()},
        "policy": policy_to_dict(r.policy),
        "computed_at": r.computed_at,
    }


# --- cycle, gap, plan, delta, benchmark -----------------------------------

def target_to_dict(t: Target) -> dict:
    return {"rank": t.rank, "rationale": t.rationale, "set_at": t.set_at}


def target_from_dict(d: dict) -> Target:
    return Target(rank=d["rank"], rationale=d["rationale"], set_at=d["set_at"])


def cycle_to_dict(c: MeasurementCycle) -> dict:
    return {
        "cycle_id": c.cycle_id,
        "assessment_id": c.assessment_id,
        "state": c.state,
        "history": [{"state": h.state, "artifact": h.artifact, "at": h.at}
                    for h in c.history],
        "initial_score": score_to_dict(c.initial_score),
        "target": target_to_dict(c.target) if c.target else None,
    }


def score_from_dict(d: dict) -> ScoreReport:
    from .model import CobitCriterion

    return ScoreReport(
        assessment_id=d["assessment_id"],
        institution=d["institution"],
        model_id=d["model_id"],
        model_version=d["model_version"],
        overall_level=d["overall_level"],
        per_concept_levels=dict(d["per_concept_levels"]),
        vacuous_concepts=frozenset(d["vacuous_concepts"]),
        fulfillment={_sub_from_key(k): Fulfillment(v)
                     for k, v in d["fulfillment"].items()},
        criteria_rollup={CobitCriterion(k): (v["fulfilled"], v["total"])
                         for k, v in d["criteria_rollup"].items()},
        policy=policy_from_dict(d["policy"]),
        computed_at=d["computed_at"],
    )


def cycle_from_dict(d: dict) -> MeasurementCycle:
    return MeasurementCycle(
        cycle_id=d["cycle_id"],
        assessment_id=d["assessment_id"],
        state=d["state"],
        history=tuple(HistoryEntry(state=h["state"], artifact=h["artifact"], at=h["at"])
                      for h in d["history"]),
        initial_score=score_from_dict(d["initial_score"]),
        target=target_from_dict(d["target"]) if d.get("target") else None,
    )


def gap_to_dict(g: GapReport) -> dict:
    return {
        "current_level": g.current_level,
        "target": target_to_dict(g.target),
        "already_met": g.already_met,
        "gaps": [{"code": item.sub.code, "rank": item.sub.rank,
                  "status": item.status.value, "concept_id": item.concept_id}
                 for item in g.gaps],
        "per_concept_counts": dict(g.per_concept_counts),
    }


def plan_to_dict(p: ActionPlan) -> dict:
    return {
        "generated_at": p.generated_at,
        "items": [{
            "concept_id": i.concept_id,
            "concept_name": i.concept_name,
            "level": i.level,
            "objective": i.objective,
            "actions": list(i.actions),
            "gap_codes": list(i.gap_codes),
            "no_plan_entry": i.no_plan_entry,
        } for i in p.items],
    }


def delta_to_dict(d: DeltaReport) -> dict:
    return {
        "level_before": d.level_before,
        "level_after": d.level_after,
        "transitions": [{"code": t.sub.code, "rank": t.sub.rank,
                         "before": t.before.value, "after": t.after.value}
                        for t in d.transitions],
    }


def benchmark_to_dict(b: BenchmarkTable) -> dict:
    return {
        "model_id": b.model_id,
        "model_version": b.model_version,
        "concept_ids": list(b.concept_ids),
        "rows": [{"assessment_id": r.assessment_id, "institution": r.institution,
                  "overall_level": r.overall_level,
                  "per_concept_levels": dict(r.per_concept_levels)}
                 for r in b.rows],
    }


__all__ = [name for name in dir() if name.endswith(("_to_dict", "_from_dict"))
           or name in ("answer_value_to_json", "answer_value_from_json")]
