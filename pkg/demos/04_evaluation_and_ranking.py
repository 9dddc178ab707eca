"""Multi-criteria idea scoring: sub-score aggregation, weighting, ranking.

Quality averages specificity/feasibility/relevance; usefulness averages
acceptability/completeness/implicational explicitness; surprisingness averages
unusual/unexpected; novelty is entered directly. The composite is the weighted
mean of the four criteria, so uniform weight scaling never changes it.
"""
from ideation_engine import (
    IdeaEvaluation,
    WeightVector,
    aggregate_subscores,
    evaluate_idea,
    rank_ideas,
)

scores = aggregate_subscores(
    novelty=0.8,
    specificity=0.7, feasibility=0.9, relevance=0.8,        # -> quality
    acceptability=0.8, completeness=0.6,                     # -> usefulness
    implicational_explicitness=0.7,
    unusual=0.5, unexpected=0.3,                             # -> surprisingness
)
print(f"quality={scores.quality:.4f} usefulness={scores.usefulness:.4f} "
      f"surprisingness={scores.surprisingness:.4f}")

weights = WeightVector(novelty=3, usefulness=3, quality=2, surprisingness=1)
composite = evaluate_idea(scores, weights)
print(f"composite = {composite:.6f}")

tripled = WeightVector(novelty=9, usefulness=9, quality=6, surprisingness=3)
print(f"scale-free: {abs(evaluate_idea(scores, tripled) - composite):.2e}")

rivals = [
    IdeaEvaluation("bluetooth-chip", scores, weights, composite,
                   idea_created_at="2021-01-05T10:00:00+00:00"),
    IdeaEvaluation("heat-meter",
                   aggregate_subscores(novelty=0.5, usefulness=0.55,
                                       quality=0.7, surprisingness=0.25),
                   weights, 0.52, idea_created_at="2021-01-05T10:05:00+00:00"),
]
for evaluation in rank_ideas(rivals):
    print(f"rank {evaluation.rank}: {evaluation.idea_ref} "
          f"({evaluation.composite:.4f})")
