// Thin client over the documented endpoints; every console action maps to
// exactly one call here.

import {
  AskResponse,
  ClosureReport,
  Evaluation,
  Idea,
  NetworkMap,
  Round,
  Snapshot,
  WordCloudPayload,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError("network", `service unreachable: ${String(err)}`, 0);
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const error = (body as { error?: { code?: string; message?: string } }).error;
    throw new ApiError(
      error?.code ?? "error",
      error?.message ?? `request failed with status ${response.status}`,
      response.status,
    );
  }
  return body as T;
}

function post<T>(url: string, payload: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export interface CreateSessionRequest {
  problem_statement: string;
  decomposition_concepts: string[];
  participants: { name: string; department: string }[];
  time: string;
  place: string;
  session_id?: string;
}

export class ConsoleApi {
  constructor(readonly base: string) {}

  health(): Promise<{ status: string }> {
    return request(`${this.base}/health`);
  }

  createSession(body: CreateSessionRequest): Promise<{ state: Snapshot; digest: string }> {
    return post(`${this.base}/sessions`, body);
  }

  snapshot(sessionId: string): Promise<{ state: Snapshot; digest: string }> {
    return request(`${this.base}/sessions/${sessionId}`);
  }

  ask(sessionId: string, question: string): Promise<AskResponse> {
    return post(`${this.base}/sessions/${sessionId}/questions`, { question });
  }

  approve(sessionId: string, conceptIds: string[], relationIds: string[]): Promise<{ round: Round }> {
    return post(`${this.base}/sessions/${sessionId}/knowledge/approvals`, {
      concept_ids: conceptIds,
      relation_ids: relationIds,
    });
  }

  declareSufficient(sessionId: string): Promise<{ phase: string }> {
    return post(`${this.base}/sessions/${sessionId}/sufficient`, {});
  }

  createIdea(
    sessionId: string,
    body: {
      title: string;
      description: string;
      idea_type: string;
      concept_refs: string[];
      stimulus_question_refs: string[];
    },
  ): Promise<{ idea: Idea }> {
    return post(`${this.base}/sessions/${sessionId}/ideas`, body);
  }

  evaluate(
    sessionId: string,
    ideaId: string,
    scores: Record<string, number>,
    weights: Record<string, number>,
  ): Promise<{ evaluation: Evaluation }> {
    return post(`${this.base}/sessions/${sessionId}/ideas/${ideaId}/evaluation`, {
      scores,
      weights,
    });
  }

  ranking(sessionId: string): Promise<{ ranking: Evaluation[] }> {
    return request(`${this.base}/sessions/${sessionId}/ideas/ranking`);
  }

  endRound(sessionId: string): Promise<{ round: Round }> {
    return post(`${this.base}/sessions/${sessionId}/rounds`, {});
  }

  close(sessionId: string): Promise<{ report: ClosureReport; digest: string }> {
    return post(`${this.base}/sessions/${sessionId}/close`, {});
  }

  network(sessionId: string, includePending: boolean): Promise<{ network: NetworkMap }> {
    return request(
      `${this.base}/sessions/${sessionId}/visualization?mode=network&include_pending=${includePending}`,
    );
  }

  cloud(sessionId: string): Promise<{ cloud: WordCloudPayload }> {
    return request(`${this.base}/sessions/${sessionId}/visualization?mode=cloud`);
  }

  stimuli(sessionId: string, limit: number): Promise<{ stimuli: { kind: string; payload: string; similarity: number }[] }> {
    return request(`${this.base}/sessions/${sessionId}/stimuli?limit=${limit}`);
  }
}
