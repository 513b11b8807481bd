"""Measurement cycle, gap analysis, action plans, benchmarking."""

import random
from dataclasses import replace

import pytest

from conftest import (
    FA_RANK2,
    FA_RANK3_BOOL,
    level_n_values,
    make_responses,
    random_responses,
)
from stagegate.errors import InvalidRank, InvalidTransition, ModelMismatch
from stagegate.model import SubRequirement
from stagegate.planner import (
    CycleState,
    GapItem,
    GapReport,
    Target,
    build_action_plan,
    build_gap_report,
    compare_assessments,
    identify_gaps,
    recommend_actions,
    remeasure,
    render_benchmark,
    set_target,
    start_cycle,
)
from stagegate.scoring import Answer, Degree, Fulfillment, compute_score, what_if


def measured_cycle(seed_model, values=None, aid="a1", institution="Test University"):
    rs = make_responses(seed_model, values or {}, assessment_id=aid,
                        institution=institution)
    score = compute_score(seed_model, rs)
    return start_cycle(aid, score), rs, score


class TestCycleTransitions:
    def test_happy_path(self, seed_model):
        cycle, rs, score = measured_cycle(seed_model)
        assert cycle.state == CycleState.MEASURED
        cycle = set_target(cycle, 2, "peer median")
        assert cycle.state == CycleState.GOALS_SET
        cycle, gap = identify_gaps(cycle, score, seed_model)
        assert cycle.state == CycleState.GAPS_IDENTIFIED
        cycle, plan = recommend_actions(cycle, gap, seed_model)
        assert cycle.state == CycleState.ACTIONS_RECOMMENDED
        cycle, new_score, delta, successor = remeasure(cycle, seed_model, rs)
        assert cycle.state == CycleState.REMEASURED
        assert successor.state == CycleState.MEASURED
        assert [h.state for h in cycle.history] == [
            CycleState.MEASURED, CycleState.GOALS_SET, CycleState.GAPS_IDENTIFIED,
            CycleState.ACTIONS_RECOMMENDED, CycleState.REMEASURED,
        ]

    def test_set_target_twice_rejected(self, seed_model):
        cycle, _, _ = measured_cycle(seed_model)
        cycle = set_target(cycle, 3, "")
        with pytest.raises(InvalidTransition):
            set_target(cycle, 4, "")

    def test_invalid_rank(self, seed_model):
        cycle, _, _ = measured_cycle(seed_model)
        with pytest.raises(InvalidRank):
            set_target(cycle, 0, "")
        with pytest.raises(InvalidRank):
            set_target(cycle, 6, "")

    def test_gaps_require_goals(self, seed_model):
        cycle, _, score = measured_cycle(seed_model)
        with pytest.raises(InvalidTransition):
            identify_gaps(cycle, score, seed_model)

    def test_remeasure_requires_actions(self, seed_model):
        cycle, rs, _ = measured_cycle(seed_model)
        with pytest.raises(InvalidTransition):
            remeasure(cycle, seed_model, rs)

    def test_history_is_append_only_and_ordered(self, seed_model):
        cycle, _, score = measured_cycle(seed_model)
        before = cycle.history
        cycle2 = set_target(cycle, 2, "")
        assert cycle.history == before  # original untouched
        assert cycle2.history[:len(before)] == before
        times = [h.at for h in cycle2.history]
        assert times == sorted(times)

    def test_random_sequences_respect_order(self, seed_model):
        rng = random.Random(5)
        order = [CycleState.MEASURED, CycleState.GOALS_SET,
                 CycleState.GAPS_IDENTIFIED, CycleState.ACTIONS_RECOMMENDED,
                 CycleState.REMEASURED]
        for _ in range(500):
            cycle, rs, score = measured_cycle(seed_model)
            gap = None
            for _ in range(rng.randint(1, 8)):
                op = rng.randrange(4)
                try:
                    if op == 0:
                        cycle = set_target(cycle, rng.randint(1, 5), "")
                    elif op == 1:
                        cycle, gap = identify_gaps(cycle, score, seed_model)
                    elif op == 2:
                        cycle, _ = recommend_actions(cycle, gap, seed_model)
                    else:
                        cycle, _, _, _ = remeasure(cycle, seed_model, rs,
                                                   open_successor=False)
                except InvalidTransition:
                    pass
                states = [h.state for h in cycle.history]
                assert states == order[:len(states)]


class TestGaps:
    def test_empty_answers_target_2(self, seed_model):
        _, _, score = measured_cycle(seed_model)
        report = build_gap_report(seed_model, score, Target(rank=2, rationale=""))
        assert [g.sub.code for g in report.gaps] == FA_RANK2
        assert all(g.sub.rank == 2 for g in report.gaps)
        assert all(g.concept_id == "FA" for g in report.gaps)
        assert report.per_concept_counts == {"FA": 4}
        assert not report.already_met

    def test_level_3_target_4(self, seed_model):
        _, _, score = measured_cycle(seed_model, level_n_values(3))
        assert score.overall_level == 3
        report = build_gap_report(seed_model, score, Target(rank=4, rationale=""))
        assert [(g.sub.code, g.sub.rank) for g in report.gaps] == [("FA4", 4), ("FA6", 4)]

    def test_target_at_or_below_current_already_met(self, seed_model):
        _, _, score = measured_cycle(seed_model, level_n_values(3))
        report = build_gap_report(seed_model, score, Target(rank=2, rationale=""))
        assert report.already_met
        assert report.gaps == ()

    def test_empty_gaps_iff_target_met(self, seed_model):
        rng = random.Random(13)
        for _ in range(200):
            rs = random_responses(rng, seed_model)
            score = compute_score(seed_model, rs)
            target = Target(rank=rng.randint(1, 5), rationale="")
            report = build_gap_report(seed_model, score, target)
            assert (len(report.gaps) == 0) == (score.overall_level >= target.rank)

    def test_gap_ordering_rank_then_concept(self, seed_model):
        _, _, score = measured_cycle(seed_model)
        report = build_gap_report(seed_model, score, Target(rank=5, rationale=""))
        ranks = [g.sub.rank for g in report.gaps]
        assert ranks == sorted(ranks)
        assert len(report.gaps) == 16


class TestActionPlan:
    def test_fa_floor_plan_text(self, seed_model):
        _, _, score = measured_cycle(seed_model)
        report = build_gap_report(seed_model, score, Target(rank=2, rationale=""))
        plan = build_action_plan(report, seed_model)
        assert len(plan.items) == 1
        item = plan.items[0]
        assert item.concept_id == "FA"
        assert item.level == 1
        assert not item.no_plan_entry
        assert "sign a basic contract" in item.actions[0]
        assert item.gap_codes == tuple(FA_RANK2)

    def test_service_registration_plan_text(self, seed_model):
        gap = GapReport(
            current_level=1, target=Target(rank=2, rationale=""),
            gaps=(GapItem(sub=SubRequirement("REGx", 2),
                          status=Fulfillment.UNANSWERED, concept_id="REG"),),
            per_concept_counts={"REG": 1}, already_met=False)
        plan = build_action_plan(gap, seed_model)
        assert "A simple service catalogue with basic information should be created" \
            in plan.items[0].actions[0]

    def test_blank_action_cell_objective_only(self, seed_model):
        gap = GapReport(
            current_level=1, target=Target(rank=2, rationale=""),
            gaps=(GapItem(sub=SubRequirement("ALIGNx", 2),
                          status=Fulfillment.UNANSWERED, concept_id="ALIGN"),),
            per_concept_counts={"ALIGN": 1}, already_met=False)
        plan = build_action_plan(gap, seed_model)
        item = plan.items[0]
        assert item.actions == ()
        assert "not defined, implemented and aligned" in item.objective

    def test_rank3_gap_falls_back_to_level_1_entry(self, seed_model):
        # no level-2 plan published: nearest lower level wins
        _, _, score = measured_cycle(seed_model, level_n_values(2))
        report = build_gap_report(seed_model, score, Target(rank=3, rationale=""))
        plan = build_action_plan(report, seed_model)
        assert plan.items[0].level == 1
        assert plan.items[0].concept_id == "FA"

    def test_unpublished_concept_yields_stub(self, seed_model):
        gap = GapReport(
            current_level=1, target=Target(rank=2, rationale=""),
            gaps=(GapItem(sub=SubRequirement("QMx", 2),
                          status=Fulfillment.UNANSWERED, concept_id="QM"),),
            per_concept_counts={"QM": 1}, already_met=False)
        plan = build_action_plan(gap, seed_model)
        assert plan.items[0].no_plan_entry
        assert plan.items[0].objective == "no plan entry published"


class TestRemeasure:
    def test_level_up_delta(self, seed_model):
        cycle, rs, score = measured_cycle(seed_model)
        cycle = set_target(cycle, 2, "")
        cycle, gap = identify_gaps(cycle, score, seed_model)
        cycle, _ = recommend_actions(cycle, gap, seed_model)
        new_rs = make_responses(seed_model, {c: True for c in FA_RANK2},
                                assessment_id="a1")
        cycle, new_score, delta, successor = remeasure(cycle, seed_model, new_rs)
        assert (delta.level_before, delta.level_after) == (1, 2)
        flips = [(t.sub.code, t.sub.rank) for t in delta.transitions]
        assert flips == [(c, 2) for c in FA_RANK2]
        assert successor.initial_score.overall_level == 2

    def test_identical_responses_empty_delta(self, seed_model):
        cycle, rs, score = measured_cycle(seed_model, level_n_values(2))
        cycle = set_target(cycle, 3, "")
        cycle, gap = identify_gaps(cycle, score, seed_model)
        cycle, _ = recommend_actions(cycle, gap, seed_model)
        _, new_score, delta, _ = remeasure(cycle, seed_model, rs)
        assert delta.transitions == ()
        assert delta.level_before == delta.level_after == 2

    def test_model_mismatch(self, seed_model):
        cycle, rs, score = measured_cycle(seed_model)
        cycle = set_target(cycle, 2, "")
        cycle, gap = identify_gaps(cycle, score, seed_model)
        cycle, _ = recommend_actions(cycle, gap, seed_model)
        foreign = replace(rs, model_version="0.9")
        with pytest.raises(ModelMismatch):
            remeasure(cycle, seed_model, foreign)


class TestGapSoundness:
    @staticmethod
    def overrides_for(model, gaps):
        """Fulfill every gap: booleans yes, degrees at the needed threshold."""
        needed: dict[str, object] = {}
        for g in gaps:
            ind = model.indicator(g.sub.code)
            if ind.response_kind.value == "boolean":
                needed[ind.code] = True
            else:
                offset = ind.levels.index(g.sub.rank)
                degree = (Degree.LOW, Degree.MEDIUM, Degree.HIGH)[min(offset, 2)]
                prev = needed.get(ind.code, Degree.NONE)
                needed[ind.code] = max(prev, degree)
        return {c: Answer(indicator_code=c, value=v) for c, v in needed.items()}

    def test_fulfilling_all_gaps_reaches_target(self, seed_model):
        rng = random.Random(41)
        for _ in range(100):
            rs = random_responses(rng, seed_model, allow_na=False)
            score = compute_score(seed_model, rs)
            target = Target(rank=rng.randint(2, 5), rationale="")
            report = build_gap_report(seed_model, score, target)
            overrides = self.overrides_for(seed_model, report.gaps)
            assert what_if(seed_model, rs, overrides).overall_level >= target.rank

    def test_each_gap_item_is_necessary(self, seed_model):
        rng = random.Random(43)
        for _ in range(40):
            rs = random_responses(rng, seed_model, allow_na=False)
            score = compute_score(seed_model, rs)
            target = Target(rank=rng.randint(2, 5), rationale="")
            report = build_gap_report(seed_model, score, target)
            full = self.overrides_for(seed_model, report.gaps)
            for dropped in report.gaps:
                overrides = dict(full)
                ind = seed_model.indicator(dropped.sub.code)
                if ind.response_kind.value == "boolean":
                    overrides[ind.code] = Answer(indicator_code=ind.code, value=False)
                else:
                    # cap the degree just below what the dropped rank needs
                    offset = ind.levels.index(dropped.sub.rank)
                    needed = (Degree.LOW, Degree.MEDIUM, Degree.HIGH)[min(offset, 2)]
                    overrides[ind.code] = Answer(indicator_code=ind.code,
                                                 value=Degree(needed - 1))
                assert what_if(seed_model, rs, overrides).overall_level < target.rank


class TestBenchmark:
    def score_for(self, seed_model, values, aid, institution):
        rs = make_responses(seed_model, values, assessment_id=aid,
                            institution=institution)
        return compute_score(seed_model, rs)

    def test_ordering(self, seed_model):
        a = self.score_for(seed_model, level_n_values(3), "a", "Uni A")
        b = self.score_for(seed_model, {}, "b", "Uni B")
        table = compare_assessments([b, a])
        assert [r.institution for r in table.rows] == ["Uni A", "Uni B"]
        assert table.rows[0].overall_level == 3

    def test_stable_tie_order(self, seed_model):
        a = self.score_for(seed_model, {}, "a", "Uni A")
        b = self.score_for(seed_model, {}, "b", "Uni B")
        table = compare_assessments([b, a])
        assert [r.institution for r in table.rows] == ["Uni A", "Uni B"]

    def test_single_row(self, seed_model):
        a = self.score_for(seed_model, {}, "a", "Uni A")
        assert len(compare_assessments([a]).rows) == 1

    def test_mixed_versions_rejected(self, seed_model):
        a = self.score_for(seed_model, {}, "a", "Uni A")
        b = replace(self.score_for(seed_model, {}, "b", "Uni B"), model_version="2.0")
        with pytest.raises(ModelMismatch):
            compare_assessments([a, b])

    def test_text_rendering_aligned(self, seed_model):
        a = self.score_for(seed_model, level_n_values(2), "a", "Uni A")
        text = render_benchmark(compare_assessments([a]))
        lines = text.splitlines()
        assert lines[0].startswith("institution")
        assert "Uni A" in lines[2]
