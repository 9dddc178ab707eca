// Payload shapes of the engine's HTTP API.

export type Phase = "stimulation" | "qa" | "ideation";

export interface Concept {
  concept_id: string;
  label: string;
  source: string;
  weight: number;
  approved: boolean;
}

export interface Relation {
  relation_id: string;
  from_concept: string;
  to_concept: string;
  label: string;
  weight: number;
  approved: boolean;
}

export interface Round {
  number: number;
  phase: Phase;
  concepts: Concept[];
  relations: Relation[];
  stimuli: { kind: string; payload: string; similarity: number }[];
}

export interface Idea {
  idea_id: string;
  title: string;
  description: string;
  idea_type: string;
  concept_refs: string[];
  stimulus_question_refs: string[];
  created_at: string;
}

export interface AskedQuestion {
  question_id: string;
  text: string;
  answers_ref: number;
  suggested: string[];
  accepted_suggestion: number | null;
}

export interface CandidateAnswer {
  text: string;
  passage_ref: number;
  source_tag: string;
  confidence: number;
}

export interface Evaluation {
  idea_ref: string;
  composite: number;
  rank: number;
  scores: Record<string, unknown>;
  weights: Record<string, number>;
}

export interface Snapshot {
  session_id: string;
  problem_statement: string;
  context_terms: string[];
  rounds: Round[];
  status: "active" | "closed";
  idea_set: Idea[];
  question_log: AskedQuestion[];
  answer_log: CandidateAnswer[][];
  evaluations: Record<string, Evaluation>;
}

export interface NetworkMap {
  nodes: { id: string; label: string; kind: string; weight: number }[];
  edges: { source: string; target: string; label: string; weight: number }[];
}

export interface WordCloudPayload {
  entries: { term: string; weight: number }[];
}

export interface PendingKnowledge {
  concepts: Concept[];
  relations: Relation[];
}

export interface AskResponse {
  answers: CandidateAnswer[];
  suggested_questions: string[];
  pending_knowledge: PendingKnowledge;
}

export interface ClosureReport {
  session_id: string;
  ranked_evaluations: Evaluation[];
  exports: { idea_id: string; artifact_id: string }[];
  idea_receipts: string[];
  question_receipts: string[];
}

export function currentRound(snapshot: Snapshot): Round {
  return snapshot.rounds[snapshot.rounds.length - 1];
}
