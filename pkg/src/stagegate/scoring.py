"""Staged-rule scoring: answers in, maturity levels out.

The qualification rule is conjunctive and no-skip: an institution holds
level L only if every sub-requirement of every rank up to L is fulfilled.
Level 1 is the floor and needs nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum, IntEnum
from typing import Mapping

from .errors import AnswerKindError, ModelMismatch, RankMismatch, UnknownIndicator
from .model import (
    CobitCriterion,
    Indicator,
    MaturityModel,
    ResponseKind,
    SubRequirement,
    derive_subrequirements,
)


class Degree(IntEnum):
    """Ordinal compliance scale for graded questions."""

    NONE = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3


DEGREE_WORDS = {"none": Degree.NONE, "low": Degree.LOW,
                "medium": Degree.MEDIUM, "high": Degree.HIGH}


@dataclass(frozen=True)
class NotApplicable:
    justification: str

    def __post_init__(self):
        if not self.justification.strip():
            raise ValueError("NotApplicable requires a non-empty justification")


AnswerValue = bool | Degree | NotApplicable


@dataclass(frozen=True)
class Answer:
    indicator_code: str
    value: AnswerValue
    answered_at: str = field(default_factory=lambda: _now_iso())


@dataclass(frozen=True)
class ResponseSet:
    assessment_id: str
    institution: str
    model_id: str
    model_version: str
    answers: Mapping[str, Answer] = field(default_factory=dict)

    def with_answer(self, answer: Answer) -> "ResponseSet":
        merged = dict(self.answers)
        merged[answer.indicator_code] = answer
        return replace(self, answers=merged)


class Fulfillment(str, Enum):
    FULFILLED = "fulfilled"
    UNFULFILLED = "unfulfilled"
    UNANSWERED = "unanswered"
    NOT_APPLICABLE = "not_applicable"


class NaHandling(str, Enum):
    STRICT = "strict"    # NA counts as unfulfilled
    EXCUSE = "excuse"    # NA counts as fulfilled, flagged in reports


@dataclass(frozen=True)
class ScoringPolicy:
    na_handling: NaHandling = NaHandling.STRICT
    # minimum degree per rank offset within a multi-level indicator
    # (offset 0 = its lowest rank); offsets past the end reuse the last entry
    degree_thresholds: tuple[Degree, ...] = (Degree.LOW, Degree.MEDIUM, Degree.HIGH)

    def __post_init__(self):
        if not self.degree_thresholds:
            raise ValueError("degree_thresholds must be non-empty")
        if list(self.degree_thresholds) != sorted(self.degree_thresholds):
            raise ValueError("degree_thresholds must be monotone non-decreasing")

    def threshold_for(self, offset: int) -> Degree:
        if offset < len(self.degree_thresholds):
            return self.degree_thresholds[offset]
        return self.degree_thresholds[-1]


DEFAULT_POLICY = ScoringPolicy()
EXCUSE_POLICY = ScoringPolicy(na_handling=NaHandling.EXCUSE)


@dataclass(frozen=True)
class ScoreReport:
    assessment_id: str
    institution: str
    model_id: str
    model_version: str
    overall_level: int
    per_concept_levels: dict[str, int]
    vacuous_concepts: frozenset[str]
    fulfillment: dict[SubRequirement, Fulfillment]
    criteria_rollup: dict[CobitCriterion, tuple[int, int]]
    policy: ScoringPolicy
    computed_at: str


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def check_answer(model: MaturityModel, answer: Answer) -> None:
    """Validate an answer against the model; raises on bad code or kind."""
    ind = model.indicator(answer.indicator_code)
    if ind is None:
        raise UnknownIndicator(f"unknown indicator code {answer.indicator_code!r}")
    value = answer.value
    if isinstance(value, NotApplicable):
        return
    if ind.response_kind is ResponseKind.BOOLEAN and not isinstance(value, bool):
        raise AnswerKindError(
            f"{ind.code} expects a yes/no answer, got {type(value).__name__}")
    if ind.response_kind is ResponseKind.DEGREE and not isinstance(value, Degree):
        raise AnswerKindError(
            f"{ind.code} expects a degree answer (none/low/medium/high)")


def fulfills(indicator: Indicator, rank: int, answer: Answer | None,
             policy: ScoringPolicy = DEFAULT_POLICY) -> Fulfillment:
    """Fulfillment status of one sub-requirement given at most one answer."""
    if rank not in indicator.levels:
        raise RankMismatch(
            f"{indicator.code} is not assigned to rank {rank} (levels: {list(indicator.levels)})")
    if answer is None:
        return Fulfillment.UNANSWERED
    value = answer.value
    if isinstance(value, NotApplicable):
        return Fulfillment.NOT_APPLICABLE
    if indicator.response_kind is ResponseKind.BOOLEAN:
        if not isinstance(value, bool):
            raise AnswerKindError(f"{indicator.code} expects a yes/no answer")
        return Fulfillment.FULFILLED if value else Fulfillment.UNFULFILLED
    if not isinstance(value, Degree):
        raise AnswerKindError(f"{indicator.code} expects a degree answer")
    offset = indicator.levels.index(rank)
    needed = policy.threshold_for(offset)
    return Fulfillment.FULFILLED if value >= needed else Fulfillment.UNFULFILLED


def _satisfied(status: Fulfillment, policy: ScoringPolicy) -> bool:
    if status is Fulfillment.FULFILLED:
        return True
    return (status is Fulfillment.NOT_APPLICABLE
            and policy.na_handling is NaHandling.EXCUSE)


def _check_responses(model: MaturityModel, responses: ResponseSet) -> None:
    if (responses.model_id, responses.model_version) != (model.model_id, model.version):
        raise ModelMismatch(
            f"responses reference {responses.model_id}@{responses.model_version}, "
            f"model is {model.ref}")
    for answer in responses.answers.values():
        check_answer(model, answer)


def _staged_level(statuses: list[tuple[int, Fulfillment]], policy: ScoringPolicy) -> int:
    """Highest L such that every sub-requirement of rank <= L is satisfied."""
    blocked_at = 6
    for rank, status in statuses:
        if not _satisfied(status, policy):
            blocked_at = min(blocked_at, rank)
    return min(blocked_at - 1, 5)


def compute_score(model: MaturityModel, responses: ResponseSet,
                  policy: ScoringPolicy = DEFAULT_POLICY) -> ScoreReport:
    """Score a response set under the staged no-skip rule."""
    _check_responses(model, responses)

    fulfillment: dict[SubRequirement, Fulfillment] = {}
    for sub in derive_subrequirements(model):
        ind = model.indicator(sub.code)
        fulfillment[sub] = fulfills(ind, sub.rank, responses.answers.get(sub.code), policy)

    overall = _staged_level(
        [(s.rank, st) for s, st in fulfillment.items()], policy)

    per_concept: dict[str, int] = {}
    vacuous: set[str] = set()
    for concept in model.concepts:
        codes = {i.code for i in concept.indicators}
        concept_statuses = [(s.rank, st) for s, st in fulfillment.items()
                            if s.code in codes]
        if not concept_statuses:
            per_concept[concept.id] = 5
            vacuous.add(concept.id)
        else:
            per_concept[concept.id] = _staged_level(concept_statuses, policy)

    rollup: dict[CobitCriterion, tuple[int, int]] = {}
    for sub, status in fulfillment.items():
        ind = model.indicator(sub.code)
        for tag in ind.criteria_tags:
            done, total = rollup.get(tag, (0, 0))
            rollup[tag] = (done + (status is Fulfillment.FULFILLED), total + 1)

    return ScoreReport(
        assessment_id=responses.assessment_id,
        institution=responses.institution,
        model_id=model.model_id,
        model_version=model.version,
        overall_level=overall,
        per_concept_levels=per_concept,
        vacuous_concepts=frozenset(vacuous),
        fulfillment=fulfillment,
        criteria_rollup=rollup,
        policy=policy,
        computed_at=_now_iso(),
    )


def what_if(model: MaturityModel, responses: ResponseSet,
            overrides: Mapping[str, Answer],
            policy: ScoringPolicy = DEFAULT_POLICY) -> ScoreReport:
    """Score a hypothetical response set; the stored one is untouched."""
    for code, answer in overrides.items():
        if model.indicator(code) is None:
            raise UnknownIndicator(f"override for unknown indicator code {code!r}")
        check_answer(model, answer)
    merged = dict(responses.answers)
    merged.update(overrides)
    return compute_score(model, replace(responses, answers=merged), policy)


def brute_force_level(model: MaturityModel, responses: ResponseSet,
                      policy: ScoringPolicy = DEFAULT_POLICY) -> int:
    """Independent oracle: literal enumeration of the staged rule.

    Intentionally naive; kept as the reference the optimized path is
    property-tested against. Do not share code with compute_score.
    """
    _check_responses(model, responses)
    for candidate in (5, 4, 3, 2):
        ok = True
        for rank in range(2, candidate + 1):
            for concept in model.concepts:
                for ind in concept.indicators:
                    if rank in ind.levels:
                        status = fulfills(ind, rank, responses.answers.get(ind.code), policy)
                        if not _satisfied(status, policy):
                            ok = False
        if ok:
            return candidate
    return 1


__all__ = [
    "Degree", "DEGREE_WORDS", "NotApplicable", "Answer", "ResponseSet",
    "Fulfillment", "NaHandling", "ScoringPolicy", "DEFAULT_POLICY",
    "EXCUSE_POLICY", "ScoreReport", "check_answer", "fulfills",
    "compute_score", "what_if", "brute_force_level",
]
