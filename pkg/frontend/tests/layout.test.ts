import { describe, expect, it } from "vitest";

import { layoutNetwork } from "../src/layout.js";
import { NetworkMap } from "../src/types.js";

const NETWORK: NetworkMap = {
  nodes: [
    { id: "a", label: "a", kind: "concept", weight: 1 },
    { id: "b", label: "b", kind: "concept", weight: 2 },
    { id: "c", label: "c", kind: "idea", weight: 1 },
    { id: "d", label: "d", kind: "question", weight: 1 },
  ],
  edges: [
    { source: "a", target: "b", label: "x", weight: 1 },
    { source: "c", target: "a", label: "built_from_concept", weight: 1 },
  ],
};

describe("force layout", () => {
  it("is deterministic for the same network", () => {
    const first = layoutNetwork(NETWORK);
    const second = layoutNetwork(NETWORK);
    for (const [id, point] of first) {
      expect(second.get(id)).toEqual(point);
    }
  });

  it("keeps every node inside the viewport", () => {
    const positions = layoutNetwork(NETWORK, 640, 480);
    expect(positions.size).toBe(4);
    for (const point of positions.values()) {
      expect(point.x).toBeGreaterThanOrEqual(20);
      expect(point.x).toBeLessThanOrEqual(620);
      expect(point.y).toBeGreaterThanOrEqual(20);
      expect(point.y).toBeLessThanOrEqual(460);
    }
  });

  it("pulls connected nodes closer than the loosest pair", () => {
    const positions = layoutNetwork(NETWORK, 640, 480, 300);
    const distance = (p: string, q: string) => {
      const a = positions.get(p)!;
      const b = positions.get(q)!;
      return Math.hypot(a.x - b.x, a.y - b.y);
    };
    const maxPair = Math.max(
      distance("a", "b"), distance("a", "c"), distance("a", "d"),
      distance("b", "c"), distance("b", "d"), distance("c", "d"));
    expect(distance("a", "b")).toBeLessThan(maxPair + 1e-9);
    expect(distance("a", "b")).toBeLessThan(distance("b", "d"));
  });

  it("handles empty and single-node maps", () => {
    expect(layoutNetwork({ nodes: [], edges: [] }).size).toBe(0);
    const single = layoutNetwork({
      nodes: [{ id: "only", label: "only", kind: "concept", weight: 1 }],
      edges: [],
    });
    expect(single.size).toBe(1);
  });
});
