"""Multi-criteria idea evaluation: sub-score aggregation, weighted composite, ranking.

The composite is the weighted mean of novelty, usefulness, quality and
surprisingness:

    composite = (novelty * w_n + usefulness * w_u + quality * w_q
                 + surprisingness * w_s) / (w_n + w_u + w_q + w_s)

Quality aggregates specificity/feasibility/relevance, usefulness aggregates
acceptability/completeness/implicational explicitness, surprisingness
aggregates unusual/unexpected; novelty is always entered directly. All values
are human judgments in [0, 1]; the engine only aggregates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import ValidationError

COMPOSITE_DIGITS = 12

_QUALITY_SUBS = ("specificity", "feasibility", "relevance")
_USEFULNESS_SUBS = ("acceptability", "completeness", "implicational_explicitness")
_SURPRISE_SUBS = ("unusual", "unexpected")


@dataclass(frozen=True)
class CriterionScores:
    novelty: float
    usefulness: float
    quality: float
    surprisingness: float
    subscores: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class WeightVector:
    novelty: float
    usefulness: float
    quality: float
    surprisingness: float

    def __post_init__(self):
        for name in ("novelty", "usefulness", "quality", "surprisingness"):
            if getattr(self, name) < 0.0:
                raise ValidationError(f"weight {name} must be >= 0")
        if self.total() <= 0.0:
            raise ValidationError("at least one criterion weight must be positive")

    def total(self) -> float:
        return self.novelty + self.usefulness + self.quality + self.surprisingness


@dataclass
class IdeaEvaluation:
    idea_ref: str
    scores: CriterionScores
    weights: WeightVector
    composite: float
    rank: int = 0
    idea_created_at: str = ""


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must be in [0, 1], got {value}")
    return float(value)


def _criterion(name: str, direct: Optional[float], sub_names: tuple[str, ...],
               supplied: dict[str, float]) -> float:
    present = [s for s in sub_names if s in supplied]
    if present:
        if len(present) != len(sub_names):
            missing = [s for s in sub_names if s not in supplied]
            raise ValidationError(
                f"{name} sub-scores incomplete: missing {', '.join(missing)}")
        return sum(supplied[s] for s in sub_names) / len(sub_names)
    if direct is None:
        raise ValidationError(f"{name} requires a direct value or its sub-scores")
    return direct


def aggregate_subscores(novelty: float,
                        usefulness: Optional[float] = None,
                        quality: Optional[float] = None,
                        surprisingness: Optional[float] = None,
                        **subscores: float) -> CriterionScores:
    """Build CriterionScores from direct criteria and/or their sub-scores."""
    unknown = set(subscores) - set(_QUALITY_SUBS + _USEFULNESS_SUBS + _SURPRISE_SUBS)
    if unknown:
        raise ValidationError(f"unknown sub-score field(s): {', '.join(sorted(unknown))}")
    checked = {name: _check_unit(name, value) for name, value in subscores.items()}
    novelty = _check_unit("novelty", novelty)
    for name, value in (("usefulness", usefulness), ("quality", quality),
                        ("surprisingness", surprisingness)):
        if value is not None:
            _check_unit(name, value)
    return CriterionScores(
        novelty=novelty,
        usefulness=_criterion("usefulness", usefulness, _USEFULNESS_SUBS, checked),
        quality=_criterion("quality", quality, _QUALITY_SUBS, checked),
        surprisingness=_criterion("surprisingness", surprisingness, _SURPRISE_SUBS, checked),
        subscores=checked,
    )


def evaluate_idea(scores: CriterionScores, weights: WeightVector) -> float:
    """Weighted mean of the four criterion scores, in double precision."""
    total = weights.total()
    if total <= 0.0:
        raise ValidationError("at least one criterion weight must be positive")
    composite = (scores.novelty * weights.novelty
                 + scores.usefulness * weights.usefulness
                 + scores.quality * weights.quality
                 + scores.surprisingness * weights.surprisingness) / total
    return composite


def stored_composite(scores: CriterionScores, weights: WeightVector) -> float:
    """Composite rounded to the stored precision (12 decimal digits)."""
    return round(evaluate_idea(scores, weights), COMPOSITE_DIGITS)


def rank_ideas(evaluations: list[IdeaEvaluation]) -> list[IdeaEvaluation]:
    """Descending composite; ties by earlier creation time, then id. Ranks 1..n."""
    if not evaluations:
        raise ValidationError("rank_ideas requires at least one evaluation")
    ordered = sorted(evaluations,
                     key=lambda e: (-e.composite, e.idea_created_at, e.idea_ref))
    for position, evaluation in enumerate(ordered, start=1):
        evaluation.rank = position
    return ordered
