// Mirrors the labeling service's JSON bodies exactly.

export interface Doc {
  id: string;
  ts: number;
  text: string;
  loc: string | null;
  lang: string | null;
}

export type Label = "R" | "NR";

export interface Ack {
  ok: boolean;
  id: string;
  applied: boolean;
}

export interface Progress {
  labeled_R: number;
  labeled_NR: number;
  skipped: number;
  remaining: number;
  percent_R: number | null;
}

export interface ExportEntry {
  id: string;
  label: Label;
  source: "human" | "model";
  score: number | null;
  at: string;
}
