import { describe, expect, it } from "vitest";

import { aggregate, composite, previewComposite, SubScoreForm } from "../src/composite.js";

const FORM: SubScoreForm = {
  novelty: 0.8,
  specificity: 0.7,
  feasibility: 0.8,
  relevance: 0.8,
  acceptability: 0.8,
  completeness: 0.7,
  implicational_explicitness: 0.7,
  unusual: 0.5,
  unexpected: 0.4,
};

describe("criterion aggregation", () => {
  it("averages each sub-score group", () => {
    const criteria = aggregate(FORM);
    expect(criteria.quality).toBeCloseTo((0.7 + 0.8 + 0.8) / 3, 15);
    expect(criteria.usefulness).toBeCloseTo((0.8 + 0.7 + 0.7) / 3, 15);
    expect(criteria.surprisingness).toBeCloseTo(0.45, 15);
    expect(criteria.novelty).toBe(0.8);
  });

  it("matches the server's hand example for usefulness", () => {
    const criteria = aggregate({
      ...FORM,
      acceptability: 0.6,
      completeness: 0.3,
      implicational_explicitness: 0.9,
    });
    // identical operand order to the server: ((0.6 + 0.3) + 0.9) / 3
    expect(criteria.usefulness).toBe((0.6 + 0.3 + 0.9) / 3);
    expect(criteria.usefulness).toBeCloseTo(0.6, 12);
  });
});

describe("weighted composite", () => {
  it("reproduces the server's frozen hand-arithmetic value", () => {
    const value = composite(
      { novelty: 0.8, usefulness: 0.6, quality: 0.5, surprisingness: 0.2 },
      { novelty: 2, usefulness: 2, quality: 1, surprisingness: 1 },
    );
    // server computes (1.6 + 1.2 + 0.5 + 0.2) / 6 and stores 0.5833333333333334
    expect(value).toBe(0.5833333333333334);
  });

  it("equal scores collapse to that score", () => {
    const value = composite(
      { novelty: 0.7, usefulness: 0.7, quality: 0.7, surprisingness: 0.7 },
      { novelty: 3, usefulness: 1, quality: 2, surprisingness: 5 },
    );
    expect(value).toBeCloseTo(0.7, 12);
  });

  it("is scale-free in the weights", () => {
    const criteria = { novelty: 0.31, usefulness: 0.87, quality: 0.44, surprisingness: 0.9 };
    const base = composite(criteria, { novelty: 2, usefulness: 1, quality: 3, surprisingness: 0.5 });
    for (const k of [0.5, 3, 10]) {
      const scaled = composite(criteria, {
        novelty: 2 * k,
        usefulness: 1 * k,
        quality: 3 * k,
        surprisingness: 0.5 * k,
      });
      expect(Math.abs(scaled - base)).toBeLessThanOrEqual(1e-12);
    }
  });

  it("stays within the score bounds and is NaN for all-zero weights", () => {
    for (let trial = 0; trial < 200; trial += 1) {
      const criteria = {
        novelty: Math.random(),
        usefulness: Math.random(),
        quality: Math.random(),
        surprisingness: Math.random(),
      };
      const weights = {
        novelty: Math.random() * 5,
        usefulness: Math.random() * 5,
        quality: Math.random() * 5,
        surprisingness: Math.random() * 5 + 0.01,
      };
      const value = composite(criteria, weights);
      const values = Object.values(criteria);
      expect(value).toBeGreaterThanOrEqual(Math.min(...values) - 1e-12);
      expect(value).toBeLessThanOrEqual(Math.max(...values) + 1e-12);
    }
    expect(
      composite(
        { novelty: 1, usefulness: 1, quality: 1, surprisingness: 1 },
        { novelty: 0, usefulness: 0, quality: 0, surprisingness: 0 },
      ),
    ).toBeNaN();
  });

  it("previewComposite chains aggregation and weighting", () => {
    const preview = previewComposite(FORM, {
      novelty: 3,
      usefulness: 3,
      quality: 2,
      surprisingness: 1,
    });
    // the bundled walkthrough's first idea scores exactly these values
    expect(preview).toBeCloseTo(0.731481481481, 9);
  });
});
