from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ideation_engine.errors import ValidationError
from ideation_engine.evaluation import (
    CriterionScores,
    IdeaEvaluation,
    WeightVector,
    aggregate_subscores,
    evaluate_idea,
    rank_ideas,
    stored_composite,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
weight = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)


def brute_force_composite(scores, weights) -> float:
    """Independent evaluation of the weighted-mean formula."""
    values = [scores.novelty, scores.usefulness, scores.quality, scores.surprisingness]
    ws = [weights.novelty, weights.usefulness, weights.quality, weights.surprisingness]
    return sum(v * w for v, w in zip(values, ws)) / sum(ws)


# ----------------------------------------------------------------------
# sub-score aggregation

def test_aggregate_equal_subscores_mean():
    scores = aggregate_subscores(novelty=0.5, usefulness=0.5, surprisingness=0.5,
                                 specificity=1.0, feasibility=1.0, relevance=1.0)
    assert scores.quality == 1.0


def test_aggregate_usefulness_hand_mean():
    scores = aggregate_subscores(novelty=0.5, quality=0.5, surprisingness=0.5,
                                 acceptability=0.6, completeness=0.3,
                                 implicational_explicitness=0.9)
    assert scores.usefulness == pytest.approx(0.6)


def test_aggregate_out_of_range_names_field():
    with pytest.raises(ValidationError) as err:
        aggregate_subscores(novelty=0.5, usefulness=0.5, quality=0.5,
                            surprisingness=0.5, unusual=1.2, unexpected=0.1)
    assert "unusual" in str(err.value)


def test_aggregate_requires_complete_subscore_groups():
    with pytest.raises(ValidationError):
        aggregate_subscores(novelty=0.5, usefulness=0.5, surprisingness=0.5,
                            specificity=0.4)  # feasibility/relevance missing


def test_aggregate_direct_entry_permitted():
    scores = aggregate_subscores(novelty=0.2, usefulness=0.4, quality=0.6,
                                 surprisingness=0.8)
    assert (scores.novelty, scores.usefulness, scores.quality,
            scores.surprisingness) == (0.2, 0.4, 0.6, 0.8)


def test_aggregate_unknown_subscore_rejected():
    with pytest.raises(ValidationError):
        aggregate_subscores(novelty=0.5, usefulness=0.5, quality=0.5,
                            surprisingness=0.5, shininess=0.9)


# ----------------------------------------------------------------------
# the composite formula

def scores_of(n, u, q, s):
    return CriterionScores(novelty=n, usefulness=u, quality=q, surprisingness=s)


def test_evaluate_hand_arithmetic():
    composite = evaluate_idea(scores_of(0.8, 0.6, 0.5, 0.2),
                              WeightVector(2, 2, 1, 1))
    assert composite == pytest.approx((1.6 + 1.2 + 0.5 + 0.2) / 6, abs=1e-15)
    assert composite == pytest.approx(0.5833333333333334, abs=1e-12)


def test_evaluate_equal_scores_any_weights():
    assert evaluate_idea(scores_of(0.7, 0.7, 0.7, 0.7),
                         WeightVector(3, 1, 2, 5)) == pytest.approx(0.7)


def test_evaluate_one_hot_equal_weights():
    assert evaluate_idea(scores_of(1, 0, 0, 0), WeightVector(1, 1, 1, 1)) == 0.25


def test_all_zero_weights_rejected():
    with pytest.raises(ValidationError):
        WeightVector(0, 0, 0, 0)


def test_negative_weight_rejected():
    with pytest.raises(ValidationError):
        WeightVector(1, -0.5, 1, 1)


@given(n=unit, u=unit, q=unit, s=unit,
       wn=weight, wu=weight, wq=weight, ws=weight)
@settings(max_examples=200)
def test_composite_bounds_property(n, u, q, s, wn, wu, wq, ws):
    if wn + wu + wq + ws <= 0:
        return
    composite = evaluate_idea(scores_of(n, u, q, s), WeightVector(wn, wu, wq, ws))
    assert min(n, u, q, s) - 1e-12 <= composite <= max(n, u, q, s) + 1e-12


@given(n=unit, u=unit, q=unit, s=unit,
       wn=weight, wu=weight, wq=weight, ws=weight,
       k=st.sampled_from([0.5, 3.0, 10.0]))
@settings(max_examples=200)
def test_weight_scaling_invariance_property(n, u, q, s, wn, wu, wq, ws, k):
    if wn + wu + wq + ws <= 0:
        return
    base = evaluate_idea(scores_of(n, u, q, s), WeightVector(wn, wu, wq, ws))
    scaled = evaluate_idea(scores_of(n, u, q, s),
                           WeightVector(k * wn, k * wu, k * wq, k * ws))
    assert scaled == pytest.approx(base, abs=1e-12)


def test_monotonicity_in_each_criterion():
    rng = random.Random(7)
    for _ in range(200):
        values = [rng.random() for _ in range(4)]
        ws = [rng.uniform(0.1, 5.0) for _ in range(4)]
        base = evaluate_idea(scores_of(*values), WeightVector(*ws))
        for pos in range(4):
            if values[pos] >= 1.0:
                continue
            bumped = list(values)
            bumped[pos] = min(1.0, bumped[pos] + 0.05)
            higher = evaluate_idea(scores_of(*bumped), WeightVector(*ws))
            assert higher > base


def test_oracle_equivalence_randomized():
    rng = random.Random(99)
    for _ in range(500):
        scores = scores_of(*(rng.random() for _ in range(4)))
        weights = WeightVector(*(rng.uniform(0.0, 5.0) for _ in range(3)),
                               rng.uniform(0.01, 5.0))
        assert abs(evaluate_idea(scores, weights)
                   - brute_force_composite(scores, weights)) <= 1e-12


# ----------------------------------------------------------------------
# ranking

def make_eval(idea_id, composite, created="2022-01-01T00:00:00+00:00"):
    return IdeaEvaluation(
        idea_ref=idea_id, scores=scores_of(composite, composite, composite, composite),
        weights=WeightVector(1, 1, 1, 1), composite=composite,
        idea_created_at=created,
    )


def test_rank_descending_composites():
    ranked = rank_ideas([make_eval("low", 0.41), make_eval("high", 0.58)])
    assert [e.idea_ref for e in ranked] == ["high", "low"]
    assert [e.rank for e in ranked] == [1, 2]


def test_rank_tie_break_earlier_created_first():
    ranked = rank_ideas([
        make_eval("later", 0.5, created="2022-01-02T00:00:00+00:00"),
        make_eval("early", 0.5, created="2022-01-01T00:00:00+00:00"),
    ])
    assert [e.idea_ref for e in ranked] == ["early", "later"]


def test_rank_single_evaluation():
    ranked = rank_ideas([make_eval("only", 0.9)])
    assert ranked[0].rank == 1


def test_rank_requires_at_least_one():
    with pytest.raises(ValidationError):
        rank_ideas([])


def test_rank_invariant_under_uniform_weight_scaling():
    rng = random.Random(123)
    scores = [scores_of(*(rng.random() for _ in range(4))) for _ in range(6)]
    base_weights = WeightVector(2.0, 1.0, 3.0, 0.5)
    for k in (0.5, 3.0, 10.0):
        scaled = WeightVector(k * 2.0, k * 1.0, k * 3.0, k * 0.5)
        base_rank = rank_ideas([
            IdeaEvaluation(f"i{n}", s, base_weights,
                           stored_composite(s, base_weights),
                           idea_created_at=f"t{n}")
            for n, s in enumerate(scores)])
        scaled_rank = rank_ideas([
            IdeaEvaluation(f"i{n}", s, scaled,
                           stored_composite(s, scaled),
                           idea_created_at=f"t{n}")
            for n, s in enumerate(scores)])
        assert [e.idea_ref for e in base_rank] == [e.idea_ref for e in scaled_rank]
