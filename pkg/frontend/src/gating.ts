// Enabled-state for every phase-gated control, derived from the snapshot.
// Mirrors the engine's preconditions so the console never offers an action
// the engine would reject.

import { Snapshot, currentRound } from "./types.js";

export interface ControlStates {
  ask: boolean;
  approve: boolean;
  sufficient: boolean;
  createIdea: boolean;
  evaluate: boolean;
  endRound: boolean;
  close: boolean;
}

export function controlStates(snapshot: Snapshot): ControlStates {
  const active = snapshot.status === "active";
  const round = currentRound(snapshot);
  const pending =
    round.concepts.filter((c) => !c.approved).length +
    round.relations.filter((r) => !r.approved).length;
  const approved = round.concepts.filter((c) => c.approved).length;
  return {
    ask: active && (round.phase === "stimulation" || round.phase === "qa"),
    approve: active && pending > 0,
    sufficient: active && round.phase !== "ideation" && approved > 0,
    createIdea: active && round.phase === "ideation" && approved > 0,
    evaluate: active && snapshot.idea_set.length > 0,
    endRound: active && round.phase === "ideation",
    close: active && round.phase === "ideation" && snapshot.idea_set.length > 0,
  };
}
