"""HTTP API under /api/v1: a thin adapter over the engine and store.

Error bodies are {"error": {"code": ..., "message": ...}} with 400 for
validation problems, 404 for missing records, and 409 for stale version
tokens. Mutations on an assessment require the base version the client
last saw.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import jsonio, planner, store, workflow
from .errors import (
    AnswerKindError,
    InvalidRank,
    InvalidTransition,
    ModelMismatch,
    NotFound,
    StagegateError,
    UnknownIndicator,
    VersionConflict,
)
from .model import MaturityModel, model_to_dict
from .planner import CycleState
from .scoring import Answer, DEFAULT_POLICY, EXCUSE_POLICY

_STATUS = {
    NotFound: 404,
    VersionConflict: 409,
    AnswerKindError: 400,
    UnknownIndicator: 400,
    InvalidTransition: 409,
    InvalidRank: 400,
    ModelMismatch: 400,
}


class CreateAssessment(BaseModel):
    institution: str
    assessment_id: str | None = None


class PutAnswer(BaseModel):
    value: Any
    base_version: int


class SetTarget(BaseModel):
    rank: int
    rationale: str = ""


class WhatIf(BaseModel):
    overrides: dict[str, Any] = {}


def _policy(name: str | None):
    return EXCUSE_POLICY if name == "excuse" else DEFAULT_POLICY


def create_app(ws: store.Workspace, model: MaturityModel) -> FastAPI:
    app = FastAPI(title="stagegate", docs_url=None, redoc_url=None)

    @app.exception_handler(StagegateError)
    async def domain_error(_: Request, exc: StagegateError):
        status = next((s for t, s in _STATUS.items() if isinstance(exc, t)), 400)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code, "message": str(exc)}})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/v1/model")
    def get_model():
        return model_to_dict(model)

    @app.post("/api/v1/assessments", status_code=201)
    def create_assessment(body: CreateAssessment):
        aid, version = workflow.create_assessment(
            ws, model, body.institution, assessment_id=body.assessment_id)
        return {"assessment_id": aid, "version": version, "model": model.ref}

    @app.get("/api/v1/assessments/{aid}")
    def get_assessment(aid: str):
        responses = store.load_assessment(ws, aid)
        payload = jsonio.responses_to_dict(responses)
        payload["version"] = store.latest_version(ws, aid)
        cycle = store.active_cycle(ws, aid)
        payload["cycle_state"] = cycle.state if cycle else None
        return payload

    @app.put("/api/v1/assessments/{aid}/answers/{code}")
    def put_answer(aid: str, code: str, body: PutAnswer):
        value = jsonio.answer_value_from_json(body.value)
        version = workflow.record_answer(
            ws, aid, Answer(indicator_code=code, value=value),
            base_version=body.base_version)
        return {"assessment_id": aid, "code": code, "version": version}

    @app.get("/api/v1/assessments/{aid}/score")
    def get_score(aid: str, policy: str | None = None):
        return jsonio.score_to_dict(workflow.current_score(ws, aid, _policy(policy)))

    @app.post("/api/v1/assessments/{aid}/target")
    def post_target(aid: str, body: SetTarget):
        cycle = workflow.set_target(ws, aid, body.rank, body.rationale)
        return jsonio.cycle_to_dict(cycle)

    @app.get("/api/v1/assessments/{aid}/gap")
    def get_gap(aid: str, policy: str | None = None):
        cycle = store.active_cycle(ws, aid)
        if cycle is not None and cycle.state == CycleState.GOALS_SET:
            report = workflow.identify_gaps(ws, aid, _policy(policy))
        else:
            report = workflow.gap_report(ws, aid, _policy(policy))
        return jsonio.gap_to_dict(report)

    @app.get("/api/v1/assessments/{aid}/plan")
    def get_plan(aid: str, policy: str | None = None):
        cycle = store.active_cycle(ws, aid)
        if cycle is not None and cycle.state == CycleState.GAPS_IDENTIFIED:
            plan = workflow.recommend_actions(ws, aid, _policy(policy))
        else:
            # past the recommendation step: rebuild the view without advancing
            report = workflow.gap_report(ws, aid, _policy(policy))
            mdl = workflow.model_for(ws, aid)
            plan = planner.build_action_plan(report, mdl)
        return jsonio.plan_to_dict(plan)

    @app.post("/api/v1/assessments/{aid}/whatif")
    def post_whatif(aid: str, body: WhatIf, policy: str | None = None):
        overrides = {code: Answer(indicator_code=code,
                                  value=jsonio.answer_value_from_json(raw))
                     for code, raw in body.overrides.items()}
        return jsonio.score_to_dict(workflow.what_if(ws, aid, overrides, _policy(policy)))

    @app.post("/api/v1/assessments/{aid}/remeasure")
    def post_remeasure(aid: str, policy: str | None = None):
        score, delta = workflow.remeasure(ws, aid, _policy(policy))
        return {"score": jsonio.score_to_dict(score),
                "delta": jsonio.delta_to_dict(delta)}

    @app.get("/api/v1/benchmark")
    def get_benchmark(ids: str = Query(...), policy: str | None = None):
        id_list = [s for s in ids.split(",") if s]
        table = workflow.benchmark(ws, id_list, _policy(policy))
        return jsonio.benchmark_to_dict(table)

    return app


__all__ = ["create_app"]
