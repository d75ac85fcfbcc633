/** The visualizer page: controls window, code window with the executed
 * line highlighted, three RAM blocks, execution controls, and the input
 * modal. Every displayed value originates from a service response; the
 * UI holds no interpreter of its own. */

import {
  ApiError,
  type Diagnostic,
  type Fault,
  type SessionStatus,
  ServiceClient,
  type Snippet,
  type StepResponse,
  type ThreeBlock,
  type TraceStep,
} from "./api.js";
import {
  BLOCK_LABELS,
  type BlockKey,
  EMPTY_BLOCK_TEXT,
  formatCellValue,
  outputsOf,
  threeBlockFromStep,
} from "./ram.js";

export interface AppOptions {
  baseUrl: string;
}

export const SPEED_CHOICES_MS = [250, 500, 1000, 2000] as const;

interface ParamField {
  key: string;
  label: string;
  optional?: boolean;
  choices?: string[];
}

/** One form per control, mirroring the service's snippet kinds. */
const SNIPPET_FORMS: { kind: string; label: string; params: ParamField[] }[] = [
  {
    kind: "declaration",
    label: "Declaration",
    params: [
      { key: "name", label: "Name" },
      { key: "type", label: "Type", choices: ["Integer", "String"] },
      { key: "size", label: "Array size", optional: true },
    ],
  },
  {
    kind: "assignment",
    label: "Assignment",
    params: [
      { key: "target", label: "Target" },
      { key: "expr", label: "Expression" },
    ],
  },
  {
    kind: "data_input",
    label: "Data Input",
    params: [
      { key: "target", label: "Target" },
      { key: "prompt", label: "Prompt", optional: true },
    ],
  },
  {
    kind: "data_output",
    label: "Data Output",
    params: [{ key: "expr", label: "Expression" }],
  },
  {
    kind: "condition",
    label: "Condition Statement",
    params: [{ key: "condition", label: "Condition" }],
  },
  {
    kind: "looping",
    label: "Looping Statement",
    params: [
      { key: "counter", label: "Counter" },
      { key: "from", label: "From" },
      { key: "to", label: "To" },
      { key: "step", label: "Step", optional: true },
    ],
  },
  {
    kind: "insert_text",
    label: "Insert text/statement",
    params: [{ key: "text", label: "Text" }],
  },
];

const PAGE = `
  <div class="layout">
    <section class="controls">
      <h2>Controls</h2>
      <form id="snippet-form">
        <label>Control
          <select id="snippet-kind"></select>
        </label>
        <div id="snippet-params"></div>
        <button type="submit" id="insert-snippet">Insert</button>
        <p id="snippet-error" class="error" hidden></p>
      </form>
      <hr>
      <button id="start">Start session</button>
      <button id="reset" hidden>Reset</button>
      <p id="banner" class="error" hidden></p>
      <hr>
      <button id="step" disabled>Step</button>
      <button id="play" disabled>Run</button>
      <label>Speed
        <select id="speed"></select>
      </label>
      <p>Status: <span id="status">no session</span></p>
      <label>Replay
        <input type="range" id="replay" min="-1" max="-1" value="-1" step="1" disabled>
      </label>
      <span id="replay-pos"></span>
    </section>
    <section class="code">
      <h2>Code</h2>
      <textarea id="editor" rows="14" spellcheck="false"></textarea>
      <ol id="code-lines" start="1" hidden></ol>
      <ul id="diagnostics" class="error"></ul>
      <div id="fault-panel" class="error" hidden>
        <p id="fault-message"></p>
        <p id="fault-suggestion"></p>
      </div>
      <h3>What happened</h3>
      <ul id="captions"></ul>
      <h3>Output</h3>
      <ul id="output-list"></ul>
    </section>
    <section class="ram" id="ram-view">
      <div class="ram-block" data-block="before">
        <h3>${BLOCK_LABELS.before}</h3>
        <table></table>
      </div>
      <div class="ram-block" data-block="after_declaration">
        <h3>${BLOCK_LABELS.after_declaration}</h3>
        <table></table>
      </div>
      <div class="ram-block" data-block="after_assignment">
        <h3>${BLOCK_LABELS.after_assignment}</h3>
        <table></table>
      </div>
    </section>
  </div>
  <div id="input-modal" class="modal" hidden>
    <form class="modal-box" id="input-form">
      <h3 id="input-title"></h3>
      <input id="input-value" autocomplete="off">
      <button type="submit" id="input-ok">OK</button>
    </form>
  </div>
`;

export class App {
  readonly client: ServiceClient;

  private sessionId: string | null = null;
  private status: SessionStatus | "idle" = "idle";
  private steps: TraceStep[] = [];
  private cursor = -1;
  private playing = false;
  private speedMs: number = SPEED_CHOICES_MS[1];
  private resumeAfterInput = false;
  private inflight: Promise<void> | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;

  private readonly root: HTMLElement;
  private readonly editor: HTMLTextAreaElement;
  private readonly codeLines: HTMLOListElement;
  private readonly ramView: HTMLElement;

  constructor(root: HTMLElement, options: AppOptions) {
    this.client = new ServiceClient(options.baseUrl);
    this.root = root;
    root.innerHTML = PAGE;
    this.editor = this.el<HTMLTextAreaElement>("editor");
    this.codeLines = this.el<HTMLOListElement>("code-lines");
    this.ramView = this.el<HTMLElement>("ram-view");
    this.buildSnippetForm();
    this.buildSpeedSelect();
    this.wireEvents();
    this.renderBlocks({ before: [], after_declaration: [], after_assignment: [] }, -1);
    this.setStatus("idle");
  }

  /** Resolves once no service request is pending. */
  async whenIdle(): Promise<void> {
    while (this.inflight) {
      await this.inflight.catch(() => undefined);
    }
  }

  private el<T extends HTMLElement>(id: string): T {
    const found = this.root.querySelector(`#${id}`);
    if (!found) {
      throw new Error(`missing element #${id}`);
    }
    return found as T;
  }

  // ----- construction ---------------------------------------------------

  private buildSnippetForm(): void {
    const select = this.el<HTMLSelectElement>("snippet-kind");
    for (const form of SNIPPET_FORMS) {
      const option = document.createElement("option");
      option.value = form.kind;
      option.textContent = form.label;
      select.appendChild(option);
    }
    this.renderSnippetParams(SNIPPET_FORMS[0].kind);
  }

  private renderSnippetParams(kind: string): void {
    const form = SNIPPET_FORMS.find((f) => f.kind === kind);
    const holder = this.el<HTMLElement>("snippet-params");
    holder.innerHTML = "";
    if (!form) return;
    for (const param of form.params) {
      const label = document.createElement("label");
      label.textContent = param.label + (param.optional ? " (optional)" : "");
      let field: HTMLElement;
      if (param.choices) {
        const select = document.createElement("select");
        for (const choice of param.choices) {
          const option = document.createElement("option");
          option.value = choice;
          option.textContent = choice;
          select.appendChild(option);
        }
        field = select;
      } else {
        field = document.createElement("input");
        (field as HTMLInputElement).autocomplete = "off";
      }
      field.dataset.param = param.key;
      if (param.optional) field.dataset.optional = "true";
      label.appendChild(field);
      holder.appendChild(label);
    }
  }

  private buildSpeedSelect(): void {
    const select = this.el<HTMLSelectElement>("speed");
    for (const ms of SPEED_CHOICES_MS) {
      const option = document.createElement("option");
      option.value = String(ms);
      option.textContent = `${ms} ms`;
      select.appendChild(option);
    }
    select.value = String(this.speedMs);
  }

  private wireEvents(): void {
    this.el<HTMLSelectElement>("snippet-kind").addEventListener("change", (event) => {
      this.renderSnippetParams((event.target as HTMLSelectElement).value);
    });
    this.el<HTMLFormElement>("snippet-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.insertSnippet();
    });
    this.el<HTMLButtonElement>("start").addEventListener("click", () => {
      void this.startSession();
    });
    this.el<HTMLButtonElement>("reset").addEventListener("click", () => {
      this.resetSession();
    });
    this.el<HTMLButtonElement>("step").addEventListener("click", () => {
      void this.stepOnce();
    });
    this.el<HTMLButtonElement>("play").addEventListener("click", () => {
      this.togglePlay();
    });
    this.el<HTMLSelectElement>("speed").addEventListener("change", (event) => {
      this.speedMs = Number((event.target as HTMLSelectElement).value);
    });
    this.el<HTMLInputElement>("replay").addEventListener("input", (event) => {
      const k = Number((event.target as HTMLInputElement).value);
      void this.replayTo(k);
    });
    this.el<HTMLFormElement>("input-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitInput();
    });
  }

  // ----- request plumbing -----------------------------------------------

  /** At most one service request runs at a time; extra triggers are
   * ignored while one is pending (the play timer re-checks instead). */
  private exec(work: () => Promise<void>): Promise<void> {
    if (this.inflight) {
      return this.inflight;
    }
    const done = (async () => {
      try {
        await work();
        this.hideBanner();
      } catch (error) {
        if (error instanceof ApiError) {
          throw error;
        }
        this.showBanner("The service did not answer. Check it is running, then retry.");
        throw error;
      } finally {
        this.inflight = null;
      }
    })();
    this.inflight = done.catch(() => undefined).then(() => undefined);
    return done.catch(() => undefined);
  }

  private showBanner(text: string): void {
    const banner = this.el<HTMLElement>("banner");
    banner.textContent = text;
    banner.hidden = false;
  }

  private hideBanner(): void {
    this.el<HTMLElement>("banner").hidden = true;
  }

  // ----- controls window ------------------------------------------------

  private collectSnippetParams(): { kind: string; params: Record<string, string> } {
    const kind = this.el<HTMLSelectElement>("snippet-kind").value;
    const params: Record<string, string> = {};
    const holder = this.el<HTMLElement>("snippet-params");
    for (const field of holder.querySelectorAll<HTMLElement>("[data-param]")) {
      const key = field.dataset.param as string;
      const value = (field as HTMLInputElement | HTMLSelectElement).value;
      if (field.dataset.optional === "true" && value.trim() === "") {
        continue;
      }
      params[key] = value;
    }
    return { kind, params };
  }

  private insertSnippet(): Promise<void> {
    const errorLine = this.el<HTMLElement>("snippet-error");
    errorLine.hidden = true;
    if (this.sessionId) {
      errorLine.textContent = "Reset the session before editing the program.";
      errorLine.hidden = false;
      return Promise.resolve();
    }
    const { kind, params } = this.collectSnippetParams();
    return this.exec(async () => {
      try {
        const snippet = await this.client.snippet(kind, params);
        this.spliceSnippet(snippet);
      } catch (error) {
        if (error instanceof ApiError && error.errorBody) {
          const body = error.errorBody;
          errorLine.textContent = `${body.message} (hint: ${body.suggestion})`;
          errorLine.hidden = false;
          return;
        }
        throw error;
      }
    });
  }

  /** Insert the snippet's lines at the caret, on their own lines, and move
   * the caret to the service's cursor hint. */
  private spliceSnippet(snippet: Snippet): void {
    const editor = this.editor;
    const text = editor.value;
    const start = editor.selectionStart ?? text.length;
    const end = editor.selectionEnd ?? start;
    const block = snippet.lines.join("\n");
    const prefix = start > 0 && text[start - 1] !== "\n" ? "\n" : "";
    const rest = text.slice(end);
    const suffix = rest.startsWith("\n") ? "" : "\n";
    editor.value = text.slice(0, start) + prefix + block + suffix + rest;

    const hint = snippet.cursor_hint;
    let lineStart = start + prefix.length;
    for (const line of snippet.lines.slice(0, hint.line)) {
      lineStart += line.length + 1;
    }
    const caret = lineStart + (hint.column - 1);
    editor.focus();
    editor.setSelectionRange(caret, caret);
  }

  // ----- session lifecycle ----------------------------------------------

  private startSession(): Promise<void> {
    if (this.sessionId) {
      return Promise.resolve();
    }
    const source = this.editor.value;
    if (source.trim() === "") {
      return Promise.resolve();
    }
    return this.exec(async () => {
      this.renderDiagnostics([]);
      try {
        const info = await this.client.createSession(source, "line_by_line");
        this.sessionId = info.id;
        this.setStatus(info.status);
        this.steps = [];
        this.cursor = -1;
        this.lockEditor(source);
        this.renderBlocks(
          { before: [], after_declaration: [], after_assignment: [] },
          -1,
        );
        this.el<HTMLUListElement>("captions").innerHTML = "";
        this.el<HTMLUListElement>("output-list").innerHTML = "";
        this.syncControls();
      } catch (error) {
        if (error instanceof ApiError && error.diagnostics) {
          this.renderDiagnostics(error.diagnostics);
          return;
        }
        throw error;
      }
    });
  }

  private resetSession(): void {
    // sessions are never deleted remotely; the store expires them
    this.stopTimer();
    this.sessionId = null;
    this.steps = [];
    this.cursor = -1;
    this.playing = false;
    this.resumeAfterInput = false;
    this.setStatus("idle");
    this.unlockEditor();
    this.closeModal();
    this.el<HTMLElement>("fault-panel").hidden = true;
    this.renderBlocks({ before: [], after_declaration: [], after_assignment: [] }, -1);
    this.syncControls();
  }

  private lockEditor(source: string): void {
    this.editor.hidden = true;
    this.editor.disabled = true;
    const lines = source.replace(/\n$/, "").split("\n");
    this.codeLines.innerHTML = "";
    lines.forEach((line, index) => {
      const item = document.createElement("li");
      item.dataset.line = String(index + 1);
      const gutter = document.createElement("span");
      gutter.className = "gutter";
      const body = document.createElement("code");
      body.textContent = line;
      item.appendChild(gutter);
      item.appendChild(body);
      this.codeLines.appendChild(item);
    });
    this.codeLines.hidden = false;
  }

  private unlockEditor(): void {
    this.codeLines.hidden = true;
    this.codeLines.innerHTML = "";
    this.editor.hidden = false;
    this.editor.disabled = false;
  }

  private renderDiagnostics(diagnostics: Diagnostic[]): void {
    const list = this.el<HTMLUListElement>("diagnostics");
    list.innerHTML = "";
    for (const diagnostic of diagnostics) {
      const item = document.createElement("li");
      item.dataset.line = String(diagnostic.line);
      item.textContent =
        `line ${diagnostic.line}: ${diagnostic.message}` +
        ` (hint: ${diagnostic.suggestion})`;
      list.appendChild(item);
    }
  }

  // ----- execution ------------------------------------------------------

  stepOnce(): Promise<void> {
    if (!this.sessionId || this.status !== "ready") {
      return Promise.resolve();
    }
    const id = this.sessionId;
    return this.exec(async () => {
      const response = await this.client.step(id);
      this.applyStepResponse(response);
    });
  }

  private applyStepResponse(response: StepResponse): void {
    this.setStatus(response.status);
    if (response.step) {
      this.appendStep(response.step);
    }
    if (response.status === "awaiting_input" && response.prompt !== undefined) {
      this.resumeAfterInput = this.playing;
      this.playing = false;
      this.stopTimer();
      this.openModal(response.prompt);
    }
    if (response.fault) {
      this.showFault(response.fault);
    }
    if (this.isOver()) {
      this.playing = false;
      this.stopTimer();
    }
    this.syncControls();
  }

  private appendStep(step: TraceStep): void {
    this.steps.push(step);
    this.cursor = step.index;
    this.renderLive(step);
  }

  private renderLive(step: TraceStep): void {
    this.highlightLine(step.line);
    this.renderBlocks(threeBlockFromStep(step.ram), step.index);
    const captions = this.el<HTMLUListElement>("captions");
    for (const annotation of step.annotations) {
      const item = document.createElement("li");
      item.textContent = annotation;
      captions.appendChild(item);
    }
    const outputs = this.el<HTMLUListElement>("output-list");
    for (const text of outputsOf(step)) {
      const item = document.createElement("li");
      item.textContent = text;
      outputs.appendChild(item);
    }
  }

  private showFault(fault: Fault): void {
    const panel = this.el<HTMLElement>("fault-panel");
    this.el<HTMLElement>("fault-message").textContent =
      `Line ${fault.line}: ${fault.message}`;
    this.el<HTMLElement>("fault-suggestion").textContent = fault.suggestion;
    panel.hidden = false;
    this.highlightLine(fault.line);
  }

  // ----- play / pause ---------------------------------------------------

  togglePlay(): void {
    if (this.playing) {
      this.playing = false;
      this.stopTimer();
    } else if (this.status === "ready") {
      this.playing = true;
      this.schedule();
    }
    this.syncControls();
  }

  private schedule(): void {
    this.stopTimer();
    if (!this.playing) return;
    this.timer = setTimeout(() => {
      void this.tick();
    }, this.speedMs);
  }

  private async tick(): Promise<void> {
    if (!this.playing) return;
    if (this.inflight) {
      // a request is pending; try again next interval
      this.schedule();
      return;
    }
    await this.stepOnce();
    if (this.playing && this.status === "ready") {
      this.schedule();
    }
  }

  private stopTimer(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  // ----- input modal ----------------------------------------------------

  private openModal(prompt: string): void {
    this.el<HTMLElement>("input-title").textContent = prompt;
    const field = this.el<HTMLInputElement>("input-value");
    field.value = "";
    this.el<HTMLElement>("input-modal").hidden = false;
    field.focus();
  }

  private closeModal(): void {
    this.el<HTMLElement>("input-modal").hidden = true;
  }

  private submitInput(): Promise<void> {
    if (!this.sessionId || this.status !== "awaiting_input") {
      return Promise.resolve();
    }
    const id = this.sessionId;
    const value = this.el<HTMLInputElement>("input-value").value;
    return this.exec(async () => {
      const answer = await this.client.provideInput(id, value);
      this.setStatus(answer.status);
      this.closeModal();
      // run the line that consumes the value so its effect shows at once
      const response = await this.client.step(id);
      this.applyStepResponse(response);
      if (this.resumeAfterInput && this.status === "ready") {
        this.resumeAfterInput = false;
        this.playing = true;
        this.schedule();
        this.syncControls();
      }
    });
  }

  // ----- replay ---------------------------------------------------------

  replayTo(k: number): Promise<void> {
    if (!this.sessionId) {
      return Promise.resolve();
    }
    const id = this.sessionId;
    return this.exec(async () => {
      try {
        const snapshot = await this.client.snapshot(id, k);
        this.cursor = k;
        this.renderBlocks(snapshot.three_block, k);
        this.highlightLine(k >= 0 ? this.steps[k].line : null);
        this.syncControls();
      } catch (error) {
        if (error instanceof ApiError && error.status === 416) {
          this.syncControls(); // snap the slider back into range
          return;
        }
        throw error;
      }
    });
  }

  // ----- rendering ------------------------------------------------------

  private highlightLine(line: number | null): void {
    for (const item of this.codeLines.querySelectorAll("li")) {
      const current = line !== null && item.dataset.line === String(line);
      item.classList.toggle("current", current);
      const gutter = item.querySelector(".gutter");
      if (gutter) gutter.textContent = current ? "=>" : "";
    }
  }

  private renderBlocks(view: ThreeBlock, shownIndex: number): void {
    this.ramView.dataset.renderedStep = String(shownIndex);
    for (const key of Object.keys(BLOCK_LABELS) as BlockKey[]) {
      const block = this.ramView.querySelector(`[data-block="${key}"] table`);
      if (!block) continue;
      block.innerHTML = "";
      const cells = view[key];
      if (cells.length === 0) {
        const row = document.createElement("tr");
        const cell = document.createElement("td");
        cell.colSpan = 2;
        cell.textContent = EMPTY_BLOCK_TEXT;
        row.appendChild(cell);
        block.appendChild(row);
        continue;
      }
      for (const ramCell of cells) {
        const row = document.createElement("tr");
        const name = document.createElement("td");
        name.textContent = ramCell.cell;
        const value = document.createElement("td");
        value.textContent = formatCellValue(ramCell);
        row.appendChild(name);
        row.appendChild(value);
        block.appendChild(row);
      }
    }
  }

  private setStatus(status: SessionStatus | "idle"): void {
    this.status = status;
    this.root.dataset.status = status;
    this.el<HTMLElement>("status").textContent =
      status === "idle" ? "no session" : status;
  }

  private isOver(): boolean {
    return (
      this.status === "finished" ||
      this.status === "faulted" ||
      this.status === "truncated"
    );
  }

  private syncControls(): void {
    const live = this.sessionId !== null;
    const ready = live && this.status === "ready";
    this.el<HTMLButtonElement>("start").hidden = live;
    this.el<HTMLButtonElement>("reset").hidden = !live;
    this.el<HTMLButtonElement>("step").disabled = !ready;
    this.el<HTMLButtonElement>("play").disabled = !ready;
    this.el<HTMLButtonElement>("play").textContent = this.playing ? "Pause" : "Run";
    this.el<HTMLButtonElement>("insert-snippet").disabled = live;

    const slider = this.el<HTMLInputElement>("replay");
    slider.disabled = !live;
    slider.min = "-1";
    slider.max = String(this.steps.length - 1);
    slider.value = String(this.cursor);
    this.el<HTMLElement>("replay-pos").textContent = live
      ? `step ${this.cursor} of ${this.steps.length - 1}`
      : "";
  }
}

export function createApp(root: HTMLElement, options: AppOptions): App {
  return new App(root, options);
}
