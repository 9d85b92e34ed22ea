// Single-keystroke labeling: R relevant, N not relevant, S skip, Enter
// retries after an error. The controller ignores input it cannot act on,
// so this layer only maps keys and filters chords.

import type { Controller, UiAction } from "./controller.js";

export function actionForKey(key: string): UiAction | "retry" | null {
  switch (key.toLowerCase()) {
    case "r":
      return "R";
    case "n":
      return "NR";
    case "s":
      return "skip";
    case "enter":
      return "retry";
    default:
      return null;
  }
}

export interface KeyEventLike {
  key: string;
  repeat?: boolean;
  altKey?: boolean;
  ctrlKey?: boolean;
  metaKey?: boolean;
  preventDefault?: () => void;
}

export function handleKey(controller: Controller, event: KeyEventLike): boolean {
  if (event.repeat || event.altKey || event.ctrlKey || event.metaKey) return false;
  const action = actionForKey(event.key);
  if (action === null) return false;
  event.preventDefault?.();
  if (action === "retry") {
    void controller.retry();
  } else {
    void controller.submit(action);
  }
  return true;
}

export function bindKeyboard(target: EventTarget, controller: Controller): () => void {
  const onKeydown = (event: Event) => {
    handleKey(controller, event as unknown as KeyEventLike);
  };
  target.addEventListener("keydown", onKeydown);
  return () => target.removeEventListener("keydown", onKeydown);
}
