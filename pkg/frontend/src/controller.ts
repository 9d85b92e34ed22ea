// Session state machine, DOM-free so it can be tested headless.
//
// The one rule everything else hangs off: a label or skip exists only
// after the service acknowledged it. The POST must resolve before the next
// document is fetched, input is ignored while a request is in flight, and
// a failed request parks the same action for retry instead of dropping it.

import { Exhausted, type LabelApi } from "./api.js";
import type { Doc, Label, Progress } from "./types.js";

export type Phase = "loading" | "ready" | "submitting" | "error" | "exhausted";

export type UiAction = Label | "skip";

export interface State {
  phase: Phase;
  doc: Doc | null;
  progress: Progress | null;
  error: string | null;
  strategy: string;
  keyed: number;
}

interface Pending {
  docId: string;
  action: UiAction;
}

export type Listener = (state: State) => void;

export interface ControllerOptions {
  session?: string;
  strategy?: string;
}

export class Controller {
  readonly session: string;
  private state: State;
  private pending: Pending | null = null;
  private listeners: Listener[] = [];

  constructor(
    private readonly api: LabelApi,
    options: ControllerOptions = {},
  ) {
    this.session = options.session ?? "ui";
    this.state = {
      phase: "loading",
      doc: null,
      progress: null,
      error: null,
      strategy: options.strategy ?? "random",
      keyed: 0,
    };
  }

  getState(): State {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<State>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async start(): Promise<void> {
    this.set({ phase: "loading", error: null });
    try {
      const progress = await this.api.progress(this.session);
      const doc = await this.api.next(this.session);
      this.set({ phase: "ready", doc, progress });
    } catch (err) {
      if (err instanceof Exhausted) {
        await this.finish();
        return;
      }
      this.set({ phase: "error", error: String(err) });
    }
  }

  // Accepts input only when a document is on screen and nothing is in
  // flight; callers (keyboard, buttons) can fire freely.
  async submit(action: UiAction): Promise<void> {
    if (this.state.phase !== "ready" || this.state.doc === null) return;
    this.pending = { docId: this.state.doc.id, action };
    await this.flush();
  }

  // Re-attempts whatever failed. Safe to call even if the lost response
  // was actually applied: identical resubmissions are acknowledged no-ops
  // server-side, so nothing double-counts.
  async retry(): Promise<void> {
    if (this.state.phase !== "error") return;
    if (this.pending === null) {
      await this.start();
      return;
    }
    await this.flush();
  }

  private async flush(): Promise<void> {
    const pending = this.pending;
    if (pending === null) return;
    this.set({ phase: "submitting", error: null });
    try {
      if (pending.action === "skip") {
        await this.api.skip(pending.docId, this.session);
      } else {
        await this.api.label(pending.docId, pending.action, this.session);
      }
      this.pending = null;
      this.set({ keyed: this.state.keyed + 1 });
      await this.advance();
    } catch (err) {
      // pending stays parked; retry() resubmits the same action
      this.set({ phase: "error", error: String(err) });
    }
  }

  private async advance(): Promise<void> {
    try {
      const progress = await this.api.progress(this.session);
      const doc = await this.api.next(this.session);
      this.set({ phase: "ready", doc, progress });
    } catch (err) {
      if (err instanceof Exhausted) {
        await this.finish();
        return;
      }
      this.set({ phase: "error", error: String(err) });
    }
  }

  private async finish(): Promise<void> {
    let progress = this.state.progress;
    try {
      progress = await this.api.progress(this.session);
    } catch {
      // keep the last progress we saw; the session is over either way
    }
    this.set({ phase: "exhausted", doc: null, progress });
  }
}
