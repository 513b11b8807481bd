"""Maturity-model schema: levels, concepts, indicators, improvement plan.

Models are loaded from strict JSON files (unknown keys rejected) into
immutable values. A bundled seed model covers the IT-outsourcing key areas
with the Formal Agreement concept fully populated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from .errors import ParseError, SchemaError

MIN_RANK = 1
MAX_RANK = 5
# level 1 is the floor state: indicators attach to ranks 2..5 only
INDICATOR_RANKS = range(2, 6)


class Source(str, Enum):
    ISO20000 = "iso20000"
    ISO38500 = "iso38500"
    ITIL_V3 = "itil_v3"
    COBIT = "cobit"
    SELF_DEVELOPED = "self_developed"


class CobitCriterion(str, Enum):
    EFFECTIVENESS = "effectiveness"
    EFFICIENCY = "efficiency"
    CONFIDENTIALITY = "confidentiality"
    INTEGRITY = "integrity"
    AVAILABILITY = "availability"
    COMPLIANCE = "compliance"
    RELIABILITY = "reliability"


class ItResource(str, Enum):
    APPLICATIONS = "applications"
    INFORMATION = "information"
    INFRASTRUCTURE = "infrastructure"
    PEOPLE = "people"


class ResponseKind(str, Enum):
    BOOLEAN = "boolean"
    DEGREE = "degree"


@dataclass(frozen=True)
class MaturityLevel:
    rank: int
    name: str


@dataclass(frozen=True)
class Indicator:
    code: str
    question: str
    levels: tuple[int, ...]  # sorted ascending, subset of 2..5
    response_kind: ResponseKind
    sources: frozenset[Source]
    group: str | None = None
    criteria_tags: frozenset[CobitCriterion] = field(default_factory=frozenset)
    resource_tags: frozenset[ItResource] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Concept:
    id: str
    name: str
    sources: frozenset[Source]
    indicators: tuple[Indicator, ...]


@dataclass(frozen=True)
class ImprovementEntry:
    level: int
    concept_id: str
    objective: str
    actions: tuple[str, ...]


@dataclass(frozen=True)
class SubRequirement:
    """One indicator bound to one of its ranks; the atomic unit of scoring."""

    code: str
    rank: int


@dataclass(frozen=True)
class MaturityModel:
    model_id: str
    version: str
    levels: tuple[MaturityLevel, ...]
    concepts: tuple[Concept, ...]
    plan: tuple[ImprovementEntry, ...]

    def indicator(self, code: str) -> Indicator | None:
        return self._indicator_index()[0].get(code)

    def concept_of(self, code: str) -> str | None:
        return self._indicator_index()[1].get(code)

    def _indicator_index(self) -> tuple[dict[str, Indicator], dict[str, str]]:
        # memoized per instance; safe because models are immutable
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = (
                {i.code: i for c in self.concepts for i in c.indicators},
                {i.code: c.id for c in self.concepts for i in c.indicators},
            )
            object.__setattr__(self, "_index", cached)
        return cached

    @property
    def ref(self) -> str:
        return f"{self.model_id}@{self.version}"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class LintFinding:
    severity: Severity
    message: str


# ---------------------------------------------------------------------------
# loading

def _require(obj: dict, key: str, ctx: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{ctx}: missing required field '{key}'")
    return obj[key]


def _check_no_extra(obj: dict, allowed: set[str], ctx: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise SchemaError(f"{ctx}: unknown field(s) {sorted(extra)}")


def _parse_enum(enum_cls, value: str, ctx: str):
    try:
        return enum_cls(value)
    except ValueError:
        valid = ", ".join(e.value for e in enum_cls)
        raise SchemaError(f"{ctx}: invalid value {value!r}, expected one of: {valid}")


def _parse_indicator(obj: Any, ctx: str) -> Indicator:
    if not isinstance(obj, dict):
        raise SchemaError(f"{ctx}: indicator must be an object")
    _check_no_extra(obj, {"code", "question", "group", "levels", "response_kind",
                          "sources", "criteria_tags", "resource_tags"}, ctx)
    code = _require(obj, "code", ctx)
    if not isinstance(code, str) or not code:
        raise SchemaError(f"{ctx}: code must be a non-empty string")
    ctx = f"indicator {code}"
    question = _require(obj, "question", ctx)
    raw_levels = _require(obj, "levels", ctx)
    if not isinstance(raw_levels, list) or not raw_levels:
        raise SchemaError(f"{ctx}: levels must be a non-empty array")
    for r in raw_levels:
        if not isinstance(r, int) or not (MIN_RANK <= r <= MAX_RANK):
            raise SchemaError(f"{ctx}: rank {r!r} outside {MIN_RANK}..{MAX_RANK}")
        if r not in INDICATOR_RANKS:
            raise SchemaError(f"{ctx}: rank {r} not assignable to indicators (floor level owns none)")
    levels = tuple(sorted(set(raw_levels)))
    kind = _parse_enum(ResponseKind, _require(obj, "response_kind", ctx), ctx)
    if kind is ResponseKind.BOOLEAN and len(levels) > 1:
        raise SchemaError(f"{ctx}: boolean indicator cannot span multiple levels")
    raw_sources = _require(obj, "sources", ctx)
    if not isinstance(raw_sources, list) or not raw_sources:
        raise SchemaError(f"{ctx}: every indicator cites at least one source")
    sources = frozenset(_parse_enum(Source, s, ctx) for s in raw_sources)
    criteria = frozenset(_parse_enum(CobitCriterion, s, ctx)
                         for s in obj.get("criteria_tags", []))
    res = frozenset(_parse_enum(ItResource, s, ctx)
                    for s in obj.get("resource_tags", []))
    return Indicator(code=code, question=question, levels=levels, response_kind=kind,
                     sources=sources, group=obj.get("group"),
                     criteria_tags=criteria, resource_tags=res)


def _parse_concept(obj: Any) -> Concept:
    if not isinstance(obj, dict):
        raise SchemaError("concept must be an object")
    _check_no_extra(obj, {"id", "name", "sources", "indicators"}, "concept")
    cid = _require(obj, "id", "concept")
    ctx = f"concept {cid}"
    name = _require(obj, "name", ctx)
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{ctx}: name must be non-empty")
    sources = frozenset(_parse_enum(Source, s, ctx) for s in _require(obj, "sources", ctx))
    indicators = tuple(_parse_indicator(i, ctx) for i in _require(obj, "indicators", ctx))
    return Concept(id=cid, name=name, sources=sources, indicators=indicators)


def model_from_dict(data: Any) -> MaturityModel:
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    _check_no_extra(data, {"model_id", "version", "levels", "concepts", "plan"}, "model")
    model_id = _require(data, "model_id", "model")
    version = _require(data, "version", "model")

    raw_levels = _require(data, "levels", "model")
    levels = []
    for obj in raw_levels:
        _check_no_extra(obj, {"rank", "name"}, "level")
        rank = _require(obj, "rank", "level")
        if not isinstance(rank, int) or not (MIN_RANK <= rank <= MAX_RANK):
            raise SchemaError(f"level rank {rank!r} outside {MIN_RANK}..{MAX_RANK}")
        levels.append(MaturityLevel(rank=rank, name=_require(obj, "name", "level")))
    if sorted(l.rank for l in levels) != list(range(MIN_RANK, MAX_RANK + 1)):
        raise SchemaError("model must define exactly five levels with ranks 1..5")

    concepts = tuple(_parse_concept(c) for c in _require(data, "concepts", "model"))
    seen_cids: set[str] = set()
    for c in concepts:
        if c.id in seen_cids:
            raise SchemaError(f"duplicate concept id {c.id!r}")
        seen_cids.add(c.id)
    seen_codes: set[str] = set()
    for c in concepts:
        for i in c.indicators:
            if i.code in seen_codes:
                raise SchemaError(f"duplicate indicator code {i.code!r}")
            seen_codes.add(i.code)

    plan = []
    for obj in _require(data, "plan", "model"):
        _check_no_extra(obj, {"level", "concept_id", "objective", "actions"}, "plan entry")
        level = _require(obj, "level", "plan entry")
        if not isinstance(level, int) or not (MIN_RANK <= level <= MAX_RANK):
            raise SchemaError(f"plan entry level {level!r} outside {MIN_RANK}..{MAX_RANK}")
        cid = _require(obj, "concept_id", "plan entry")
        if cid not in seen_cids:
            raise SchemaError(f"plan entry references unknown concept {cid!r}")
        plan.append(ImprovementEntry(
            level=level, concept_id=cid,
            objective=_require(obj, "objective", "plan entry"),
            actions=tuple(obj.get("actions", [])),
        ))

    return MaturityModel(model_id=model_id, version=version,
                         levels=tuple(sorted(levels, key=lambda l: l.rank)),
                         concepts=concepts, plan=tuple(plan))


def model_to_dict(model: MaturityModel) -> dict:
    """Inverse of model_from_dict; round-trips structurally."""
    def indicator_dict(i: Indicator) -> dict:
        d: dict[str, Any] = {
            "code": i.code,
            "question": i.question,
            "levels": list(i.levels),
            "response_kind": i.response_kind.value,
            "sources": sorted(s.value for s in i.sources),
        }
        if i.group is not None:
            d["group"] = i.group
        if i.criteria_tags:
            d["criteria_tags"] = sorted(t.value for t in i.criteria_tags)
        if i.resource_tags:
            d["resource_tags"] = sorted(t.value for t in i.resource_tags)
        return d

    return {
        "model_id": model.model_id,
        "version": model.version,
        "levels": [{"rank": l.rank, "name": l.name} for l in model.levels],
        "concepts": [
            {
                "id": c.id,
                "name": c.name,
                "sources": sorted(s.value for s in c.sources),
                "indicators": [indicator_dict(i) for i in c.indicators],
            }
            for c in model.concepts
        ],
        "plan": [
            {"level": p.level, "concept_id": p.concept_id,
             "objective": p.objective, "actions": list(p.actions)}
            for p in model.plan
        ],
    }


def load_model(path: str | Path) -> MaturityModel:
    """Load and validate a model definition file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read model file {path}: {e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: {e.msg}", line=e.lineno, column=e.colno)
    return model_from_dict(data)


def load_seed_model() -> MaturityModel:
    """Load the bundled IT-outsourcing seed model."""
    return load_model(seed_model_path())


def seed_model_path() -> Path:
    return Path(str(resources.files("stagegate") / "seed" / "outsourcing_mm.json"))


# ---------------------------------------------------------------------------
# derived views and lint

def derive_subrequirements(model: MaturityModel,
                           concepts: Iterable[Concept] | None = None) -> list[SubRequirement]:
    """Expand indicators into (code, rank) pairs.

    Ordered by rank ascending, then concept order, then indicator order.
    A multi-level indicator contributes one sub-requirement per rank.
    """
    concepts = model.concepts if concepts is None else tuple(concepts)
    out: list[SubRequirement] = []
    for rank in INDICATOR_RANKS:
        for concept in concepts:
            for ind in concept.indicators:
                if rank in ind.levels:
                    out.append(SubRequirement(code=ind.code, rank=rank))
    return out


def lint_model(model: MaturityModel) -> list[LintFinding]:
    """Structural health check; never mutates, never raises."""
    findings: list[LintFinding] = []
    if not model.concepts:
        findings.append(LintFinding(Severity.ERROR, "model has no concepts"))
    for c in model.concepts:
        if not c.indicators:
            findings.append(LintFinding(
                Severity.WARNING, f"concept {c.id} has no indicators"))
        for i in c.indicators:
            if i.response_kind is ResponseKind.BOOLEAN and len(i.levels) > 1:
                findings.append(LintFinding(
                    Severity.ERROR,
                    f"indicator {i.code} is boolean but spans levels {list(i.levels)}"))
    populated_ranks = {r for c in model.concepts for i in c.indicators for r in i.levels}
    for rank in INDICATOR_RANKS:
        if rank not in populated_ranks:
            findings.append(LintFinding(
                Severity.WARNING, f"rank {rank} has no indicators"))
    plan_levels = {p.level for p in model.plan}
    for rank in range(MIN_RANK, MAX_RANK + 1):
        if rank not in plan_levels:
            findings.append(LintFinding(
                Severity.WARNING, f"no improvement plan entries for level {rank}"))
    return findings


__all__ = [
    "Source", "CobitCriterion", "ItResource", "ResponseKind",
    "MaturityLevel", "Indicator", "Concept", "ImprovementEntry",
    "SubRequirement", "MaturityModel", "LintFinding", "Severity",
    "load_model", "load_seed_model", "seed_model_path",
    "model_from_dict", "model_to_dict",
    "derive_subrequirements", "lint_model",
    "MIN_RANK", "MAX_RANK", "INDICATOR_RANKS",
]
