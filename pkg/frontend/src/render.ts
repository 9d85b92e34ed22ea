// DOM adapter: one function from state to screen. No decisions here
// beyond presentation; everything testable lives in the controller.

import type { State } from "./controller.js";
import { formatProgressLine } from "./format.js";

export interface Elements {
  docText: HTMLElement;
  docMeta: HTMLElement;
  progress: HTMLElement;
  status: HTMLElement;
  errorBanner: HTMLElement;
  strategy: HTMLElement;
  buttonR: HTMLButtonElement;
  buttonNR: HTMLButtonElement;
  buttonSkip: HTMLButtonElement;
  buttonRetry: HTMLButtonElement;
}

export function queryElements(root: Document): Elements {
  const byId = (id: string): HTMLElement => {
    const el = root.getElementById(id);
    if (el === null) throw new Error(`missing element #${id}`);
    return el;
  };
  return {
    docText: byId("doc-text"),
    docMeta: byId("doc-meta"),
    progress: byId("progress"),
    status: byId("status"),
    errorBanner: byId("error-banner"),
    strategy: byId("strategy"),
    buttonR: byId("btn-r") as HTMLButtonElement,
    buttonNR: byId("btn-nr") as HTMLButtonElement,
    buttonSkip: byId("btn-skip") as HTMLButtonElement,
    buttonRetry: byId("btn-retry") as HTMLButtonElement,
  };
}

const STATUS_TEXT: Record<State["phase"], string> = {
  loading: "loading…",
  ready: "ready",
  submitting: "saving…",
  error: "error",
  exhausted: "all documents labeled",
};

export function render(els: Elements, state: State): void {
  const labeling = state.phase === "ready";
  els.buttonR.disabled = !labeling;
  els.buttonNR.disabled = !labeling;
  els.buttonSkip.disabled = !labeling;
  els.buttonRetry.hidden = state.phase !== "error";

  els.status.textContent = STATUS_TEXT[state.phase];
  els.strategy.textContent = `sampling: ${state.strategy}`;

  els.errorBanner.hidden = state.phase !== "error";
  els.errorBanner.textContent = state.phase === "error" ? state.error ?? "error" : "";

  if (state.doc !== null) {
    els.docText.textContent = state.doc.text;
    els.docText.dataset.docId = state.doc.id;
    const when = new Date(state.doc.ts * 1000).toISOString();
    const extras = [state.doc.loc, state.doc.lang].filter(Boolean).join(" · ");
    els.docMeta.textContent = extras ? `${state.doc.id} · ${when} · ${extras}` : `${state.doc.id} · ${when}`;
  } else {
    els.docText.textContent = state.phase === "exhausted" ? "No documents left in this sample." : "";
    delete els.docText.dataset.docId;
    els.docMeta.textContent = "";
  }

  els.progress.textContent = state.progress === null ? "" : formatProgressLine(state.progress);
}
