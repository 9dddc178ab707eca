// Deterministic client-side force layout for the concept network canvas.
// Spring attraction along edges, pairwise repulsion, mild centering pull,
// linear cooling. Nodes start on a circle in sorted-id order so the same
// network always lands in the same layout.

import { NetworkMap } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export function layoutNetwork(
  network: NetworkMap,
  width = 640,
  height = 480,
  iterations = 150,
): Map<string, Point> {
  const ids = [...network.nodes.map((n) => n.id)].sort();
  const positions = new Map<string, Point>();
  const velocity = new Map<string, Point>();
  const radius = Math.min(width, height) / 3;
  ids.forEach((id, index) => {
    const angle = (2 * Math.PI * index) / Math.max(ids.length, 1);
    positions.set(id, {
      x: width / 2 + radius * Math.cos(angle),
      y: height / 2 + radius * Math.sin(angle),
    });
    velocity.set(id, { x: 0, y: 0 });
  });
  if (ids.length <= 1) {
    return positions;
  }

  const area = width * height;
  const k = Math.sqrt(area / ids.length) / 2;
  const edges = network.edges.filter(
    (e) => positions.has(e.source) && positions.has(e.target),
  );

  for (let step = 0; step < iterations; step += 1) {
    const cooling = 1 - step / iterations;
    const force = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));

    for (let i = 0; i < ids.length; i += 1) {
      for (let j = i + 1; j < ids.length; j += 1) {
        const a = positions.get(ids[i])!;
        const b = positions.get(ids[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let distance = Math.hypot(dx, dy);
        if (distance < 1e-6) {
          // identical positions: nudge apart deterministically
          dx = 0.01 * (i + 1);
          dy = 0.01 * (j + 1);
          distance = Math.hypot(dx, dy);
        }
        const repulsion = (k * k) / distance;
        const fx = (dx / distance) * repulsion;
        const fy = (dy / distance) * repulsion;
        force.get(ids[i])!.x += fx;
        force.get(ids[i])!.y += fy;
        force.get(ids[j])!.x -= fx;
        force.get(ids[j])!.y -= fy;
      }
    }

    for (const edge of edges) {
      const a = positions.get(edge.source)!;
      const b = positions.get(edge.target)!;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const distance = Math.max(Math.hypot(dx, dy), 1e-6);
      const attraction = (distance * distance) / k;
      const fx = (dx / distance) * attraction;
      const fy = (dy / distance) * attraction;
      force.get(edge.source)!.x -= fx;
      force.get(edge.source)!.y -= fy;
      force.get(edge.target)!.x += fx;
      force.get(edge.target)!.y += fy;
    }

    for (const id of ids) {
      const position = positions.get(id)!;
      const pull = force.get(id)!;
      pull.x += (width / 2 - position.x) * 0.02;
      pull.y += (height / 2 - position.y) * 0.02;
      const magnitude = Math.max(Math.hypot(pull.x, pull.y), 1e-6);
      const limit = 10 * cooling + 0.5;
      const scale = Math.min(magnitude, limit) / magnitude;
      position.x += pull.x * scale;
      position.y += pull.y * scale;
      position.x = Math.min(width - 20, Math.max(20, position.x));
      position.y = Math.min(height - 20, Math.max(20, position.y));
    }
  }
  return positions;
}
