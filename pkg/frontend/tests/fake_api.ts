// In-memory stand-in for the labeling service, implementing the same
// contract the real one does: seeded-order queue, human labels stored
// last-writer-wins, identical resubmission acknowledged as a no-op,
// skips excluded from progress's labeled counts.

import { Exhausted, type LabelApi } from "../src/api.js";
import type { Ack, Doc, ExportEntry, Label, Progress } from "../src/types.js";

export class FakeServer implements LabelApi {
  readonly labels = new Map<string, Label>();
  readonly skipped = new Set<string>();
  private cursor = 0;
  applications = 0;
  failNextLabel = 0;
  failNextNext = 0;

  constructor(readonly docs: Doc[]) {}

  async next(_session: string): Promise<Doc> {
    if (this.failNextNext > 0) {
      this.failNextNext -= 1;
      throw new Error("synthetic /api/next failure");
    }
    while (this.cursor < this.docs.length) {
      const doc = this.docs[this.cursor]!;
      if (!this.labels.has(doc.id) && !this.skipped.has(doc.id)) return doc;
      this.cursor += 1;
    }
    throw new Exhausted();
  }

  async label(id: string, label: Label, _session: string): Promise<Ack> {
    if (this.failNextLabel > 0) {
      this.failNextLabel -= 1;
      throw new Error("synthetic /api/label failure");
    }
    if (!this.docs.some((d) => d.id === id)) {
      throw new Error(`unknown document ${id}`);
    }
    const applied = this.labels.get(id) !== label;
    if (applied) {
      this.labels.set(id, label);
      this.applications += 1;
    }
    if (this.docs[this.cursor]?.id === id) this.cursor += 1;
    return { ok: true, id, applied };
  }

  async skip(id: string, _session: string): Promise<Ack> {
    this.skipped.add(id);
    if (this.docs[this.cursor]?.id === id) this.cursor += 1;
    return { ok: true, id, applied: true };
  }

  async progress(_session?: string): Promise<Progress> {
    let r = 0;
    for (const label of this.labels.values()) if (label === "R") r += 1;
    const labeled = this.labels.size;
    return {
      labeled_R: r,
      labeled_NR: labeled - r,
      skipped: this.skipped.size,
      remaining: Math.max(this.docs.length - labeled - this.skipped.size, 0),
      percent_R: labeled === 0 ? null : (100 * r) / labeled,
    };
  }

  async exportLabels(): Promise<ExportEntry[]> {
    return [...this.labels.entries()]
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([id, label]) => ({
        id,
        label,
        source: "human" as const,
        score: null,
        at: "1970-01-01T00:00:00Z",
      }));
  }
}

export function makeDocs(n: number): Doc[] {
  return Array.from({ length: n }, (_, i) => ({
    id: `doc${String(i).padStart(2, "0")}`,
    ts: 1_700_000_000 + i,
    text: `sample text number ${i}`,
    loc: null,
    lang: "en",
  }));
}
