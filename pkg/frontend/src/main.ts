// Wires API, controller, renderer, and inputs onto a document. Kept
// separate from boot.js so tests can initialize against any Document and
// any LabelApi implementation.

import type { LabelApi } from "./api.js";
import { Controller, type ControllerOptions } from "./controller.js";
import { bindKeyboard } from "./keyboard.js";
import { queryElements, render } from "./render.js";

export function initApp(
  root: Document,
  api: LabelApi,
  options: ControllerOptions = {},
): Controller {
  const els = queryElements(root);
  const controller = new Controller(api, options);
  controller.subscribe((state) => render(els, state));

  els.buttonR.addEventListener("click", () => void controller.submit("R"));
  els.buttonNR.addEventListener("click", () => void controller.submit("NR"));
  els.buttonSkip.addEventListener("click", () => void controller.submit("skip"));
  els.buttonRetry.addEventListener("click", () => void controller.retry());
  bindKeyboard(root.defaultView ?? root, controller);

  void controller.start();
  return controller;
}
