// DOM wiring: a domain picker, the intent box, the ranked action grid,
// and the transcript. All behavior rules live in state.ts/view.ts; this
// file only schedules requests and paints.

import { ApiError, PwimClient } from "./api.js";
import type { ActionView, RankedView } from "./api.js";
import { debounce, type Debounced } from "./debounce.js";
import {
  actCompleted,
  actFailed,
  actStarted,
  gridRefreshed,
  initialState,
  intentEdited,
  rankingArrived,
  rankingFailed,
  sessionStarted,
  type UiState,
} from "./state.js";
import { buttonStyle } from "./view.js";

export const DEBOUNCE_MS = 250;

export interface AppOptions {
  client?: PwimClient;
  debounceMs?: number;
}

interface GridEntry {
  action: ActionView;
  intensity: number | null;
  enlarged: boolean;
}

function gridEntries(state: UiState): GridEntry[] {
  if (state.ranked !== null) {
    // the server's ranked order, verbatim — never reordered or filtered
    return state.ranked.map((r: RankedView) => ({
      action: { action_id: r.action_id, summary: r.summary },
      intensity: r.intensity,
      enlarged: r.enlarged,
    }));
  }
  return state.actions.map((action) => ({ action, intensity: null, enlarged: false }));
}

export class App {
  state: UiState = initialState();

  private readonly client: PwimClient;
  private readonly scheduleIntent: Debounced<[string]>;

  // latest-wins sequencing: responses carrying an older token are
  // dropped, and at most one intent request is ever in flight
  private intentSeq = 0;
  private intentInFlight = false;
  private queuedIntent: string | null = null;

  private picker!: HTMLElement;
  private select!: HTMLSelectElement;
  private play!: HTMLElement;
  private input!: HTMLInputElement;
  private grid!: HTMLElement;
  private transcript!: HTMLOListElement;
  private banner!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    options: AppOptions = {},
  ) {
    this.client = options.client ?? new PwimClient();
    this.scheduleIntent = debounce(
      (text: string) => this.fireIntent(text),
      options.debounceMs ?? DEBOUNCE_MS,
    );
  }

  mount(): this {
    this.root.innerHTML = `
      <div id="banner" role="status" hidden></div>
      <section id="picker">
        <label for="domain-select">domain</label>
        <select id="domain-select"></select>
        <button id="start-button" type="button">start</button>
      </section>
      <section id="play" hidden>
        <input id="intent-input" type="text" autocomplete="off"
               placeholder="what do you want to do?" />
        <div id="grid"></div>
        <ol id="transcript"></ol>
      </section>
    `;
    this.banner = this.root.querySelector("#banner")!;
    this.picker = this.root.querySelector("#picker")!;
    this.select = this.root.querySelector("#domain-select")!;
    this.play = this.root.querySelector("#play")!;
    this.input = this.root.querySelector("#intent-input")!;
    this.grid = this.root.querySelector("#grid")!;
    this.transcript = this.root.querySelector("#transcript")!;

    this.root.querySelector("#start-button")!.addEventListener("click", () => {
      void this.startSession(this.select.value);
    });
    this.input.addEventListener("input", () => {
      this.onIntentChanged(this.input.value);
    });
    this.grid.addEventListener("click", (event) => {
      const button = (event.target as HTMLElement).closest("button[data-action-id]");
      if (button instanceof HTMLButtonElement) {
        void this.onActionClicked(button.dataset.actionId!);
      }
    });

    void this.loadDomains();
    this.render();
    return this;
  }

  private async loadDomains(): Promise<void> {
    try {
      const { domains } = await this.client.listDomains();
      this.select.innerHTML = "";
      for (const name of domains) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        this.select.appendChild(option);
      }
    } catch (err) {
      this.state = { ...this.state, banner: describe(err) };
    }
    this.render();
  }

  async startSession(domain: string): Promise<void> {
    try {
      const resp = await this.client.createSession(domain);
      this.state = sessionStarted(this.state, resp);
    } catch (err) {
      this.state = { ...this.state, banner: describe(err) };
    }
    this.render();
  }

  onIntentChanged(text: string): void {
    this.state = intentEdited(this.state, text);
    if (text.trim() === "") {
      // cleared: go neutral now and drop whatever is still in flight
      this.scheduleIntent.cancel();
      this.intentSeq += 1;
      this.queuedIntent = null;
    } else {
      this.scheduleIntent(text);
    }
    this.render();
  }

  private fireIntent(text: string): void {
    if (this.intentInFlight) {
      this.queuedIntent = text; // latest edit wins once the wire is free
      return;
    }
    void this.sendIntent(text);
  }

  private async sendIntent(text: string): Promise<void> {
    const sessionId = this.state.session_id;
    if (sessionId === null) {
      return;
    }
    const token = ++this.intentSeq;
    const forStep = this.state.step;
    this.intentInFlight = true;
    try {
      const resp = await this.client.submitIntent(sessionId, text);
      if (token === this.intentSeq && this.queuedIntent === null) {
        this.state = rankingArrived(this.state, forStep, resp);
      }
    } catch (err) {
      if (err instanceof ApiError && err.code === "no-session") {
        this.resetToPicker("session is gone — start a new one");
      } else if (token === this.intentSeq) {
        this.state = rankingFailed(this.state, describe(err));
      }
    } finally {
      this.intentInFlight = false;
      const queued = this.queuedIntent;
      this.queuedIntent = null;
      if (queued !== null && queued === this.state.intent_text) {
        void this.sendIntent(queued);
      }
      this.render();
    }
  }

  async onActionClicked(actionId: string): Promise<void> {
    const sessionId = this.state.session_id;
    if (sessionId === null || this.state.pending_act) {
      return; // one act at a time; extra clicks are ignored
    }
    this.state = actStarted(this.state);
    this.render();
    try {
      const resp = await this.client.act(
        sessionId,
        actionId,
        this.state.step,
        this.state.intent_text.trim() || null,
      );
      this.scheduleIntent.cancel();
      this.intentSeq += 1; // any in-flight ranking is for a dead step
      this.state = actCompleted(this.state, resp);
    } catch (err) {
      if (err instanceof ApiError && err.code === "stale-action") {
        this.state = actFailed(this.state, "that action went stale — grid refreshed");
        await this.refreshGrid(sessionId);
      } else if (err instanceof ApiError && err.code === "no-session") {
        this.resetToPicker("session is gone — start a new one");
      } else {
        this.state = actFailed(this.state, describe(err));
      }
    }
    this.render();
  }

  private async refreshGrid(sessionId: string): Promise<void> {
    try {
      const detail = await this.client.getSession(sessionId);
      this.state = gridRefreshed(this.state, detail.step, detail.actions, detail.transcript);
    } catch (err) {
      if (err instanceof ApiError && err.code === "no-session") {
        this.resetToPicker("session is gone — start a new one");
      } else {
        this.state = { ...this.state, banner: describe(err) };
      }
    }
  }

  private resetToPicker(message: string): void {
    this.scheduleIntent.cancel();
    this.intentSeq += 1;
    this.queuedIntent = null;
    this.state = { ...initialState(), banner: message };
  }

  render(): void {
    const inSession = this.state.session_id !== null;
    this.picker.hidden = inSession;
    this.play.hidden = !inSession;

    this.banner.hidden = this.state.banner === null;
    this.banner.textContent = this.state.banner ?? "";

    if (!inSession) {
      return;
    }
    if (this.input.value !== this.state.intent_text) {
      this.input.value = this.state.intent_text;
    }

    this.grid.setAttribute("aria-busy", String(this.state.pending_act));
    this.grid.innerHTML = "";
    for (const entry of gridEntries(this.state)) {
      const style = buttonStyle(entry.intensity, entry.enlarged);
      const button = document.createElement("button");
      button.type = "button";
      button.className = "action-button";
      button.dataset.actionId = entry.action.action_id;
      button.dataset.enlarged = String(entry.enlarged);
      button.textContent = entry.action.summary;
      button.style.background = style.background;
      button.style.color = style.color;
      button.style.fontSize = `${style.scale}em`;
      button.style.padding = `${0.45 * style.scale}em ${0.9 * style.scale}em`;
      this.grid.appendChild(button);
    }

    this.transcript.innerHTML = "";
    for (const row of this.state.transcript) {
      const item = document.createElement("li");
      item.className = "transcript-row";
      item.textContent =
        row.intent_text === null
          ? `[${row.step}] ${row.summary}`
          : `[${row.step}] ${row.summary} — "${row.intent_text}"`;
      this.transcript.appendChild(item);
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `${err.code}: ${err.message}`;
  }
  return String(err);
}

export function createApp(root: HTMLElement, options: AppOptions = {}): App {
  return new App(root, options).mount();
}

// auto-boot when loaded as the page's module entry point
const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement !== null) {
  createApp(rootElement);
}
