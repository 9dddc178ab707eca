// The session console: one page driving a complete ideation session against
// the HTTP API. All rendering derives from the latest server snapshot (2 s
// polling); failed calls surface inline next to the triggering control and
// change nothing client-side.

import { ApiError, ConsoleApi } from "./api.js";
import { previewComposite, SubScoreForm, Weights } from "./composite.js";
import { controlStates } from "./gating.js";
import { layoutNetwork } from "./layout.js";
import { ClosureReport, NetworkMap, Snapshot, currentRound } from "./types.js";

const SUB_SCORE_FIELDS: (keyof SubScoreForm)[] = [
  "novelty",
  "specificity",
  "feasibility",
  "relevance",
  "acceptability",
  "completeness",
  "implicational_explicitness",
  "unusual",
  "unexpected",
];

const WEIGHT_FIELDS: (keyof Weights)[] = [
  "novelty",
  "usefulness",
  "quality",
  "surprisingness",
];

const SKELETON = `
<header>
  <h1>ideation console</h1>
  <div id="phase-banner" class="banner">no session</div>
</header>

<section id="setup-panel">
  <h2>Start a session</h2>
  <label>Problem statement <input id="problem-input" type="text"></label>
  <label>Decomposition concepts (comma separated) <input id="decomposition-input" type="text"></label>
  <label>Participants (name:department, comma separated) <input id="participants-input" type="text"></label>
  <label>Time <input id="time-input" type="text"></label>
  <label>Place <input id="place-input" type="text"></label>
  <label>Session id (optional) <input id="session-id-input" type="text"></label>
  <button id="create-session">Create session</button>
  <label>Join existing <input id="join-id-input" type="text"></label>
  <button id="join-session">Join</button>
  <span id="setup-error" class="error"></span>
</section>

<main id="console-panel" hidden>
  <section id="question-panel">
    <h2>Questions</h2>
    <input id="question-input" type="text" placeholder="Ask the knowledge base">
    <button id="ask-button">Ask</button>
    <span id="question-error" class="error"></span>
    <div id="answers-list"></div>
    <div id="suggestions-list"></div>
  </section>

  <section id="approval-panel">
    <h2>Pending knowledge</h2>
    <div id="pending-list"></div>
    <button id="approve-button">Approve selected</button>
    <span id="approval-error" class="error"></span>
    <button id="sufficient-button">Concepts are sufficient</button>
    <span id="sufficient-error" class="error"></span>
  </section>

  <section id="viz-panel">
    <h2>Concept network</h2>
    <label><input id="include-pending-toggle" type="checkbox"> show pending</label>
    <canvas id="network-canvas" width="640" height="480"></canvas>
    <h2>Word cloud</h2>
    <div id="word-cloud"></div>
    <div id="stimuli-list"></div>
  </section>

  <section id="idea-panel">
    <h2>Idea board</h2>
    <label>Title <input id="idea-title" type="text"></label>
    <label>Description <input id="idea-description" type="text"></label>
    <label>Type
      <select id="idea-type">
        <option value="product">product</option>
        <option value="service">service</option>
        <option value="rule">rule</option>
        <option value="process">process</option>
        <option value="other">other</option>
      </select>
    </label>
    <fieldset id="concept-picker"><legend>Concepts</legend></fieldset>
    <fieldset id="question-picker"><legend>Stimulus questions</legend></fieldset>
    <button id="create-idea-button">Create idea</button>
    <span id="idea-error" class="error"></span>
    <ul id="idea-list"></ul>
  </section>

  <section id="evaluation-panel">
    <h2>Evaluation</h2>
    <label>Idea <select id="eval-idea-select"></select></label>
    <div id="slider-grid"></div>
    <div id="weight-grid"></div>
    <div>composite preview: <output id="eval-preview">0.000</output></div>
    <button id="submit-evaluation">Record evaluation</button>
    <span id="eval-error" class="error"></span>
    <span id="eval-server-composite"></span>
  </section>

  <section id="ranking-panel">
    <h2>Ranking</h2>
    <table id="ranking-table"><thead>
      <tr><th>rank</th><th>idea</th><th>composite</th></tr>
    </thead><tbody></tbody></table>
  </section>

  <section id="controls-panel">
    <h2>Session</h2>
    <button id="end-round-button">End round</button>
    <button id="close-button">Close session</button>
    <a id="export-dot-link" href="#" target="_blank">Export network (DOT)</a>
    <span id="controls-error" class="error"></span>
    <div id="closure-report"></div>
  </section>
</main>
`;

function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export class ConsoleApp {
  readonly api: ConsoleApi;
  private root: HTMLElement;
  private sessionId: string | null = null;
  private snapshot: Snapshot | null = null;
  private report: ClosureReport | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(root: HTMLElement, baseUrl: string, private pollMs = 2000) {
    this.root = root;
    this.api = new ConsoleApi(baseUrl);
    root.innerHTML = SKELETON;
    this.wire();
  }

  // ------------------------------------------------------------------
  // element helpers

  private element<T extends HTMLElement>(id: string): T {
    const found = this.root.querySelector(`#${id}`);
    if (!found) {
      throw new Error(`missing console element #${id}`);
    }
    return found as T;
  }

  private input(id: string): HTMLInputElement {
    return this.element<HTMLInputElement>(id);
  }

  private setError(id: string, message: string): void {
    this.element<HTMLElement>(id).textContent = message;
  }

  getSnapshot(): Snapshot | null {
    return this.snapshot;
  }

  getReport(): ClosureReport | null {
    return this.report;
  }

  // ------------------------------------------------------------------
  // wiring

  private wire(): void {
    this.element<HTMLButtonElement>("create-session").addEventListener("click", () =>
      this.handle("setup-error", async () => {
        const participants = this.input("participants-input")
          .value.split(",")
          .map((chunk) => chunk.trim())
          .filter((chunk) => chunk.length > 0)
          .map((chunk) => {
            const [name, department = ""] = chunk.split(":");
            return { name: name.trim(), department: department.trim() };
          });
        const body = {
          problem_statement: this.input("problem-input").value,
          decomposition_concepts: this.input("decomposition-input")
            .value.split(",")
            .map((term) => term.trim())
            .filter((term) => term.length > 0),
          participants,
          time: this.input("time-input").value,
          place: this.input("place-input").value,
          session_id: this.input("session-id-input").value || undefined,
        };
        const created = await this.api.createSession(body);
        this.attachSession(created.state.session_id);
      }),
    );

    this.element<HTMLButtonElement>("join-session").addEventListener("click", () =>
      this.handle("setup-error", async () => {
        const sessionId = this.input("join-id-input").value.trim();
        await this.api.snapshot(sessionId);
        this.attachSession(sessionId);
      }),
    );

    this.element<HTMLButtonElement>("ask-button").addEventListener("click", () =>
      this.handle("question-error", async () => {
        await this.api.ask(this.requireSession(), this.input("question-input").value);
        this.input("question-input").value = "";
        await this.refresh();
      }),
    );

    this.element<HTMLButtonElement>("approve-button").addEventListener("click", () =>
      this.handle("approval-error", async () => {
        const checked = Array.from(
          this.element<HTMLElement>("pending-list").querySelectorAll("input:checked"),
        ) as HTMLInputElement[];
        const conceptIds = checked
          .filter((box) => box.dataset.kind === "concept")
          .map((box) => box.dataset.id!);
        const relationIds = checked
          .filter((box) => box.dataset.kind === "relation")
          .map((box) => box.dataset.id!);
        await this.api.approve(this.requireSession(), conceptIds, relationIds);
        await this.refresh();
      }),
    );

    this.element<HTMLButtonElement>("sufficient-button").addEventListener("click", () =>
      this.handle("sufficient-error", async () => {
        await this.api.declareSufficient(this.requireSession());
        await this.refresh();
      }),
    );

    this.element<HTMLInputElement>("include-pending-toggle").addEventListener(
      "change",
      () => void this.refresh().catch(() => undefined),
    );

    this.element<HTMLButtonElement>("create-idea-button").addEventListener("click", () =>
      this.handle("idea-error", async () => {
        const conceptRefs = (
          Array.from(
            this.element<HTMLElement>("concept-picker").querySelectorAll("input:checked"),
          ) as HTMLInputElement[]
        ).map((box) => box.dataset.id!);
        const questionRefs = (
          Array.from(
            this.element<HTMLElement>("question-picker").querySelectorAll("input:checked"),
          ) as HTMLInputElement[]
        ).map((box) => box.dataset.id!);
        await this.api.createIdea(this.requireSession(), {
          title: this.input("idea-title").value,
          description: this.input("idea-description").value,
          idea_type: this.element<HTMLSelectElement>("idea-type").value,
          concept_refs: conceptRefs,
          stimulus_question_refs: questionRefs,
        });
        this.input("idea-title").value = "";
        this.input("idea-description").value = "";
        await this.refresh();
      }),
    );

    this.element<HTMLButtonElement>("submit-evaluation").addEventListener("click", () =>
      this.handle("eval-error", async () => {
        const ideaId = this.element<HTMLSelectElement>("eval-idea-select").value;
        const scores: Record<string, number> = {};
        for (const field of SUB_SCORE_FIELDS) {
          scores[field] = Number(this.input(`slider-${field}`).value);
        }
        const weights: Record<string, number> = {};
        for (const field of WEIGHT_FIELDS) {
          weights[field] = Number(this.input(`weight-${field}`).value);
        }
        const preview = this.computePreview();
        const result = await this.api.evaluate(
          this.requireSession(),
          ideaId,
          scores,
          weights,
        );
        const serverComposite = result.evaluation.composite;
        this.element<HTMLElement>("eval-server-composite").textContent =
          `server composite: ${serverComposite.toFixed(6)} ` +
          `(preview delta ${(Math.abs(serverComposite - preview)).toExponential(2)})`;
        await this.refresh();
      }),
    );

    this.element<HTMLButtonElement>("end-round-button").addEventListener("click", () =>
      this.handle("controls-error", async () => {
        await this.api.endRound(this.requireSession());
        await this.refresh();
      }),
    );

    this.element<HTMLButtonElement>("close-button").addEventListener("click", () =>
      this.handle("controls-error", async () => {
        const closed = await this.api.close(this.requireSession());
        this.report = closed.report;
        await this.refresh();
      }),
    );

    this.buildEvaluationInputs();
  }

  private buildEvaluationInputs(): void {
    const sliders = this.element<HTMLElement>("slider-grid");
    sliders.innerHTML = SUB_SCORE_FIELDS.map(
      (field) => `
      <label>${field.replace(/_/g, " ")}
        <input id="slider-${field}" type="range" min="0" max="1" step="0.01" value="0.5">
        <output id="slider-${field}-value">0.50</output>
      </label>`,
    ).join("");
    const weights = this.element<HTMLElement>("weight-grid");
    weights.innerHTML = WEIGHT_FIELDS.map(
      (field) => `
      <label>weight: ${field}
        <input id="weight-${field}" type="number" min="0" step="0.5" value="1">
      </label>`,
    ).join("");
    for (const field of SUB_SCORE_FIELDS) {
      this.input(`slider-${field}`).addEventListener("input", () => this.updatePreview());
    }
    for (const field of WEIGHT_FIELDS) {
      this.input(`weight-${field}`).addEventListener("input", () => this.updatePreview());
    }
    this.updatePreview();
  }

  computePreview(): number {
    const form = {} as SubScoreForm;
    for (const field of SUB_SCORE_FIELDS) {
      form[field] = Number(this.input(`slider-${field}`).value);
    }
    const weights = {} as Weights;
    for (const field of WEIGHT_FIELDS) {
      weights[field] = Number(this.input(`weight-${field}`).value);
    }
    return previewComposite(form, weights);
  }

  private updatePreview(): void {
    for (const field of SUB_SCORE_FIELDS) {
      this.element<HTMLElement>(`slider-${field}-value`).textContent = Number(
        this.input(`slider-${field}`).value,
      ).toFixed(2);
    }
    const preview = this.computePreview();
    this.element<HTMLElement>("eval-preview").textContent = Number.isNaN(preview)
      ? "—"
      : preview.toFixed(6);
  }

  private requireSession(): string {
    if (!this.sessionId) {
      throw new ApiError("state", "no active session", 0);
    }
    return this.sessionId;
  }

  private attachSession(sessionId: string): void {
    this.sessionId = sessionId;
    this.element<HTMLElement>("setup-panel").hidden = true;
    this.element<HTMLElement>("console-panel").hidden = false;
    this.element<HTMLAnchorElement>("export-dot-link").href =
      `${this.api.base}/sessions/${sessionId}/visualization?mode=dot`;
    if (this.timer === null && this.pollMs > 0) {
      this.timer = setInterval(() => void this.refresh().catch(() => undefined), this.pollMs);
    }
    void this.refresh().catch(() => undefined);
  }

  private async handle(errorId: string, action: () => Promise<void>): Promise<void> {
    this.setError(errorId, "");
    try {
      await action();
    } catch (err) {
      const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      this.setError(errorId, message);
    }
  }

  dispose(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  // ------------------------------------------------------------------
  // rendering

  async refresh(): Promise<void> {
    if (!this.sessionId) {
      return;
    }
    const { state } = await this.api.snapshot(this.sessionId);
    this.snapshot = state;
    this.renderBanner(state);
    this.renderQuestions(state);
    this.renderPending(state);
    this.renderIdeaBoard(state);
    this.renderRanking(state);
    this.renderClosure();
    this.applyGates(state);
    await this.renderVisualization(state);
  }

  private renderBanner(state: Snapshot): void {
    const round = currentRound(state);
    this.element<HTMLElement>("phase-banner").textContent =
      state.status === "closed"
        ? `session ${state.session_id} — closed`
        : `session ${state.session_id} — round ${round.number} — ${round.phase}`;
  }

  private renderQuestions(state: Snapshot): void {
    const answers = this.element<HTMLElement>("answers-list");
    const suggestions = this.element<HTMLElement>("suggestions-list");
    const last = state.question_log[state.question_log.length - 1];
    if (!last) {
      answers.innerHTML = "";
      suggestions.innerHTML = "";
      return;
    }
    const entries = state.answer_log[last.answers_ref] ?? [];
    answers.innerHTML =
      `<h3>${escapeHtml(last.text)}</h3>` +
      (entries.length === 0
        ? `<p class="no-answer">no answer</p>`
        : entries
            .map(
              (answer) => `
      <div class="answer">
        <div class="confidence-bar"><div class="confidence-fill" style="width:${Math.round(
          answer.confidence * 100,
        )}%"></div></div>
        <span class="confidence-value">${answer.confidence.toFixed(2)}</span>
        <span class="source-tag ${answer.source_tag}">${answer.source_tag}</span>
        <span class="answer-text">${escapeHtml(answer.text)}</span>
      </div>`,
            )
            .join(""));
    suggestions.innerHTML =
      last.suggested.length === 0
        ? ""
        : `<h4>suggested questions</h4>` +
          last.suggested
            .map(
              (text, index) =>
                `<button class="suggestion" data-index="${index}">${escapeHtml(text)}</button>`,
            )
            .join("");
    for (const button of Array.from(suggestions.querySelectorAll("button.suggestion"))) {
      button.addEventListener("click", () =>
        this.handle("question-error", async () => {
          // clicking a suggestion re-submits it as the next question
          await this.api.ask(this.requireSession(), button.textContent ?? "");
          await this.refresh();
        }),
      );
    }
  }

  private renderPending(state: Snapshot): void {
    const round = currentRound(state);
    const list = this.element<HTMLElement>("pending-list");
    const pendingConcepts = round.concepts.filter((c) => !c.approved);
    const pendingRelations = round.relations.filter((r) => !r.approved);
    if (pendingConcepts.length === 0 && pendingRelations.length === 0) {
      list.innerHTML = `<p>nothing pending</p>`;
      return;
    }
    const conceptsById = new Map(round.concepts.map((c) => [c.concept_id, c.label]));
    list.innerHTML =
      pendingConcepts
        .map(
          (concept) => `
      <label class="pending-item">
        <input type="checkbox" data-kind="concept" data-id="${concept.concept_id}" checked>
        concept: ${escapeHtml(concept.label)} (${concept.weight.toFixed(2)})
      </label>`,
        )
        .join("") +
      pendingRelations
        .map(
          (relation) => `
      <label class="pending-item">
        <input type="checkbox" data-kind="relation" data-id="${relation.relation_id}" checked>
        relation: ${escapeHtml(conceptsById.get(relation.from_concept) ?? relation.from_concept)}
        —${escapeHtml(relation.label)}→
        ${escapeHtml(conceptsById.get(relation.to_concept) ?? relation.to_concept)}
      </label>`,
        )
        .join("");
  }

  private renderIdeaBoard(state: Snapshot): void {
    const round = currentRound(state);
    const picker = this.element<HTMLElement>("concept-picker");
    picker.innerHTML =
      `<legend>Concepts</legend>` +
      round.concepts
        .filter((c) => c.approved)
        .map(
          (concept) => `
      <label><input type="checkbox" data-id="${concept.concept_id}">
        ${escapeHtml(concept.label)}</label>`,
        )
        .join("");
    const questionPicker = this.element<HTMLElement>("question-picker");
    questionPicker.innerHTML =
      `<legend>Stimulus questions</legend>` +
      state.question_log
        .map(
          (question) => `
      <label><input type="checkbox" data-id="${question.question_id}">
        ${escapeHtml(question.text)}</label>`,
        )
        .join("");
    this.element<HTMLElement>("idea-list").innerHTML = state.idea_set
      .map(
        (idea) =>
          `<li data-id="${idea.idea_id}">${escapeHtml(idea.title)} <em>${idea.idea_type}</em></li>`,
      )
      .join("");
    const select = this.element<HTMLSelectElement>("eval-idea-select");
    const previous = select.value;
    select.innerHTML = state.idea_set
      .map((idea) => `<option value="${idea.idea_id}">${escapeHtml(idea.title)}</option>`)
      .join("");
    if (previous && state.idea_set.some((idea) => idea.idea_id === previous)) {
      select.value = previous;
    }
  }

  private renderRanking(state: Snapshot): void {
    const body = this.element<HTMLElement>("ranking-table").querySelector("tbody")!;
    const evaluations = Object.values(state.evaluations);
    if (evaluations.length === 0) {
      body.innerHTML = "";
      return;
    }
    const titles = new Map(state.idea_set.map((idea) => [idea.idea_id, idea.title]));
    void this.api
      .ranking(state.session_id)
      .then(({ ranking }) => {
        body.innerHTML = ranking
          .map(
            (evaluation) => `
        <tr data-idea="${evaluation.idea_ref}">
          <td>${evaluation.rank}</td>
          <td>${escapeHtml(titles.get(evaluation.idea_ref) ?? evaluation.idea_ref)}</td>
          <td>${evaluation.composite.toFixed(6)}</td>
        </tr>`,
          )
          .join("");
      })
      .catch(() => undefined);
  }

  private renderClosure(): void {
    const container = this.element<HTMLElement>("closure-report");
    if (!this.report) {
      container.innerHTML = "";
      return;
    }
    container.innerHTML =
      `<h3>session closed</h3><ul>` +
      this.report.exports
        .map((item) => `<li class="export">${escapeHtml(item.artifact_id)}</li>`)
        .join("") +
      `</ul>`;
  }

  private applyGates(state: Snapshot): void {
    const gates = controlStates(state);
    this.element<HTMLButtonElement>("ask-button").disabled = !gates.ask;
    this.element<HTMLButtonElement>("approve-button").disabled = !gates.approve;
    this.element<HTMLButtonElement>("sufficient-button").disabled = !gates.sufficient;
    this.element<HTMLButtonElement>("create-idea-button").disabled = !gates.createIdea;
    this.element<HTMLButtonElement>("submit-evaluation").disabled = !gates.evaluate;
    this.element<HTMLButtonElement>("end-round-button").disabled = !gates.endRound;
    this.element<HTMLButtonElement>("close-button").disabled = !gates.close;
  }

  private async renderVisualization(state: Snapshot): Promise<void> {
    const includePending = this.input("include-pending-toggle").checked;
    try {
      const [{ network }, { cloud }] = await Promise.all([
        this.api.network(state.session_id, includePending),
        this.api.cloud(state.session_id),
      ]);
      this.paintNetwork(network);
      const maxWeight = cloud.entries.length > 0 ? cloud.entries[0].weight : 1;
      this.element<HTMLElement>("word-cloud").innerHTML = cloud.entries
        .map((entry) => {
          const size = 12 + Math.round((entry.weight / maxWeight) * 20);
          return `<span class="cloud-term" style="font-size:${size}px">${escapeHtml(
            entry.term,
          )}</span>`;
        })
        .join(" ");
    } catch {
      // visualization is advisory; the rest of the console stays usable
    }
  }

  private paintNetwork(network: NetworkMap): void {
    const canvas = this.element<HTMLCanvasElement>("network-canvas");
    const positions = layoutNetwork(network, canvas.width, canvas.height);
    const context = canvas.getContext ? canvas.getContext("2d") : null;
    if (!context) {
      return; // headless test environments have no canvas backend
    }
    context.clearRect(0, 0, canvas.width, canvas.height);
    context.strokeStyle = "#8884";
    for (const edge of network.edges) {
      const a = positions.get(edge.source);
      const b = positions.get(edge.target);
      if (!a || !b) continue;
      context.beginPath();
      context.moveTo(a.x, a.y);
      context.lineTo(b.x, b.y);
      context.stroke();
    }
    const palette: Record<string, string> = {
      concept: "#2b6cb0",
      idea: "#b7791f",
      question: "#2f855a",
    };
    for (const node of network.nodes) {
      const point = positions.get(node.id);
      if (!point) continue;
      context.fillStyle = palette[node.kind] ?? "#555";
      context.beginPath();
      context.arc(point.x, point.y, 4 + Math.min(node.weight, 6), 0, 2 * Math.PI);
      context.fill();
      context.fillStyle = "#222";
      context.fillText(node.label, point.x + 8, point.y + 3);
    }
  }
}

export function initConsole(root: HTMLElement, baseUrl: string, pollMs = 2000): ConsoleApp {
  return new ConsoleApp(root, baseUrl, pollMs);
}
