// Gaze sources. The default is the mouse pointer sampled at ~60 Hz; a
// recorded trace can be replayed through the same path. Both only produce
// wire samples - selection stays entirely server-side.

import type { GazeMessage } from "./types.js";

export type SampleSink = (msg: GazeMessage) => void;

export class GazeStreamer {
  private pointer: [number, number] | null = null;
  private lastT = -1;

  constructor(
    private readonly sink: SampleSink,
    private readonly now: () => number
  ) {}

  setPointer(x: number, y: number): void {
    this.pointer = [x, y];
  }

  clearPointer(): void {
    this.pointer = null;
  }

  get position(): [number, number] | null {
    return this.pointer;
  }

  // Called on a ~60 Hz cadence; emits the latest pointer position with a
  // strictly increasing integer timestamp (duplicate ticks are dropped).
  tick(): void {
    if (this.pointer === null) return;
    const t = Math.round(this.now());
    if (t <= this.lastT) return;
    this.lastT = t;
    this.sink({ type: "gaze", t_ms: t, x: this.pointer[0], y: this.pointer[1] });
  }
}

export interface TraceSample {
  t_ms: number;
  x: number;
  y: number;
}

export function parseTrace(jsonl: string): TraceSample[] {
  const out: TraceSample[] = [];
  const lines = jsonl.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let doc: unknown;
    try {
      doc = JSON.parse(line);
    } catch {
      throw new Error(`trace line ${i + 1}: not valid JSON`);
    }
    const d = doc as Record<string, unknown>;
    if (
      typeof d.t_ms !== "number" ||
      typeof d.x !== "number" ||
      typeof d.y !== "number"
    ) {
      throw new Error(`trace line ${i + 1}: expected t_ms, x, y`);
    }
    out.push({ t_ms: d.t_ms, x: d.x, y: d.y });
  }
  return out;
}

// Streams a recorded trace in order, pacing samples by their own
// timestamps against the provided clock. The cursor position is exposed so
// the renderer can animate the replay.
export class TraceReplayer {
  private index = 0;
  private startClock = 0;
  private baseT = 0;
  cursor: [number, number] | null = null;

  constructor(
    private readonly samples: TraceSample[],
    private readonly sink: SampleSink,
    private readonly now: () => number
  ) {}

  start(): void {
    this.index = 0;
    this.startClock = this.now();
    this.baseT = this.samples.length > 0 ? this.samples[0].t_ms : 0;
  }

  get done(): boolean {
    return this.index >= this.samples.length;
  }

  // Emit every sample whose relative time has elapsed.
  tick(): void {
    const elapsed = this.now() - this.startClock;
    while (!this.done) {
      const s = this.samples[this.index];
      if (s.t_ms - this.baseT > elapsed) break;
      this.sink({ type: "gaze", t_ms: s.t_ms, x: s.x, y: s.y });
      this.cursor = [s.x, s.y];
      this.index++;
    }
  }
}
