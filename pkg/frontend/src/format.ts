// Progress line shown under the document: counts, remaining, and the
// running percent-relevant at one decimal. No counts labeled yet renders
// an em-free placeholder instead of dividing by zero.

import type { Progress } from "./types.js";

export function formatPercentRelevant(progress: Progress): string {
  const labeled = progress.labeled_R + progress.labeled_NR;
  if (labeled === 0 || progress.percent_R === null) return "—";
  return `${progress.percent_R.toFixed(1)}% relevant`;
}

export function formatProgressLine(progress: Progress): string {
  const labeled = progress.labeled_R + progress.labeled_NR;
  const parts = [
    `${labeled} labeled (${progress.labeled_R} R / ${progress.labeled_NR} NR)`,
    `${progress.skipped} skipped`,
    `${progress.remaining} remaining`,
    formatPercentRelevant(progress),
  ];
  return parts.join(" · ");
}
