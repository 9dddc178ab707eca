// Evaluation math mirroring the server, so the live preview matches the
// composite the engine stores (same operand order, IEEE doubles on both
// sides; the server additionally rounds to 12 decimal digits, well inside
// the 1e-9 parity budget).

export interface SubScoreForm {
  novelty: number;
  specificity: number;
  feasibility: number;
  relevance: number;
  acceptability: number;
  completeness: number;
  implicational_explicitness: number;
  unusual: number;
  unexpected: number;
}

export interface Weights {
  novelty: number;
  usefulness: number;
  quality: number;
  surprisingness: number;
}

export interface Criteria {
  novelty: number;
  usefulness: number;
  quality: number;
  surprisingness: number;
}

export function aggregate(form: SubScoreForm): Criteria {
  return {
    novelty: form.novelty,
    usefulness:
      (form.acceptability + form.completeness + form.implicational_explicitness) / 3,
    quality: (form.specificity + form.feasibility + form.relevance) / 3,
    surprisingness: (form.unusual + form.unexpected) / 2,
  };
}

export function composite(criteria: Criteria, weights: Weights): number {
  const total =
    weights.novelty + weights.usefulness + weights.quality + weights.surprisingness;
  if (total <= 0) {
    return NaN;
  }
  return (
    (criteria.novelty * weights.novelty +
      criteria.usefulness * weights.usefulness +
      criteria.quality * weights.quality +
      criteria.surprisingness * weights.surprisingness) /
    total
  );
}

export function previewComposite(form: SubScoreForm, weights: Weights): number {
  return composite(aggregate(form), weights);
}
