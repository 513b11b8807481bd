"""Shared fixtures: seed model, answer builders, randomized generators."""

from __future__ import annotations

import random

import pytest

from stagegate.model import (
    Concept,
    Indicator,
    MaturityLevel,
    MaturityModel,
    ResponseKind,
    Source,
    load_seed_model,
)
from stagegate.scoring import Answer, Degree, NotApplicable, ResponseSet

# Formal Agreement codes grouped by the rank they gate
FA_RANK2 = ["FA2b", "FA2d", "FA2e", "FA2g"]
FA_RANK3_BOOL = ["FA1", "FA2a", "FA2c", "FA2f", "FA3a", "FA3b", "FA3c", "FA5"]
FA_RANK3 = FA_RANK3_BOOL + ["FA6"]
FA_ALL_BOOL = FA_RANK2 + FA_RANK3_BOOL + ["FA4"]


@pytest.fixture(scope="session")
def seed_model():
    return load_seed_model()


def make_responses(model: MaturityModel, values: dict, assessment_id: str = "a1",
                   institution: str = "Test University") -> ResponseSet:
    answers = {code: Answer(indicator_code=code, value=v) for code, v in values.items()}
    return ResponseSet(assessment_id=assessment_id, institution=institution,
                       model_id=model.model_id, model_version=model.version,
                       answers=answers)


def level_n_values(n: int) -> dict:
    """Answer map that puts the seed model exactly at level n (strict policy)."""
    values: dict = {}
    if n >= 2:
        values.update({c: True for c in FA_RANK2})
    if n >= 3:
        values.update({c: True for c in FA_RANK3_BOOL})
        values["FA6"] = Degree.LOW
    if n >= 4:
        values["FA4"] = True
        values["FA6"] = Degree.MEDIUM
    if n >= 5:
        values["FA6"] = Degree.HIGH
    return values


# --- randomized generators -------------------------------------------------

def random_model(rng: random.Random, model_id: str = "rnd") -> MaturityModel:
    """Synthetic model honoring the schema invariants."""
    concepts = []
    serial = 0
    for ci in range(rng.randint(1, 5)):
        indicators = []
        for _ in range(rng.randint(0, 5)):
            serial += 1
            code = f"C{ci}I{serial}"
            n_levels = rng.choice([1, 1, 1, 2, 3, 4])
            levels = tuple(sorted(rng.sample([2, 3, 4, 5], n_levels)))
            if n_levels > 1 or rng.random() < 0.3:
                kind = ResponseKind.DEGREE
            else:
                kind = ResponseKind.BOOLEAN
            indicators.append(Indicator(
                code=code, question=f"synthetic question {code}", levels=levels,
                response_kind=kind, sources=frozenset({Source.SELF_DEVELOPED})))
        concepts.append(Concept(id=f"C{ci}", name=f"Concept {ci}",
                                sources=frozenset(), indicators=tuple(indicators)))
    levels = tuple(MaturityLevel(rank=r, name=f"level {r}") for r in range(1, 6))
    return MaturityModel(model_id=model_id, version="1", levels=levels,
                         concepts=tuple(concepts), plan=())


def random_responses(rng: random.Random, model: MaturityModel,
                     answer_prob: float = 0.8, allow_na: bool = True) -> ResponseSet:
    values: dict = {}
    for concept in model.concepts:
        for ind in concept.indicators:
            if rng.random() > answer_prob:
                continue
            if allow_na and rng.random() < 0.05:
                values[ind.code] = NotApplicable(justification="not relevant here")
            elif ind.response_kind is ResponseKind.BOOLEAN:
                values[ind.code] = rng.random() < 0.5
            else:
                values[ind.code] = Degree(rng.randint(0, 3))
    return make_responses(model, values, assessment_id="rnd-a",
                          institution="Rnd University")
