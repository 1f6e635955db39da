// Canvas renderer. Draws purely from ViewState; all kinematics come from
// the shared module so rendered key positions match the server's geometry.

import type { KeyDoc } from "./types.js";
import { ViewState } from "./viewState.js";

const ARROW_GLYPHS: Record<string, string> = {
  ARROW_UP: "↑",
  ARROW_LEFT: "←",
  ARROW_RIGHT: "→",
};

const SELECTION_MARKER_MS = 700;

export class Renderer {
  private readonly ctx: CanvasRenderingContext2D;

  constructor(private readonly canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (ctx === null) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  // Scale factor between layout screen pixels and canvas pixels.
  scale(view: ViewState): number {
    if (view.layout === null) return 1;
    return Math.min(
      this.canvas.width / view.layout.screen.width_px,
      this.canvas.height / view.layout.screen.height_px
    );
  }

  toCanvas(view: ViewState, p: [number, number]): [number, number] {
    const s = this.scale(view);
    return [p[0] * s, p[1] * s];
  }

  toScreen(view: ViewState, p: [number, number]): [number, number] {
    const s = this.scale(view);
    return [p[0] / s, p[1] / s];
  }

  render(view: ViewState, nowMs: number, cursor: [number, number] | null): void {
    const ctx = this.ctx;
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    if (view.layout === null) {
      ctx.fillStyle = "#8899aa";
      ctx.font = "16px sans-serif";
      ctx.fillText(`session: ${view.status}`, 20, 30);
      return;
    }
    const layout = view.layout;
    const s = this.scale(view);
    const [cx, cy] = this.toCanvas(view, layout.screen.center);

    // Sector wedges and highlight feedback.
    const ringR = layout.params.key_ring_radius_px * 1.45 * s;
    for (const cluster of layout.clusters) {
      if (cluster.index === view.highlightedCluster) {
        const a0 = (-cluster.sector_start_deg * Math.PI) / 180;
        const a1 = (-(cluster.sector_start_deg + cluster.sector_width_deg) * Math.PI) / 180;
        ctx.beginPath();
        ctx.moveTo(cx, cy);
        ctx.arc(cx, cy, ringR, a1, a0);
        ctx.closePath();
        ctx.fillStyle = "rgba(90, 140, 220, 0.18)";
        ctx.fill();
      }
    }

    // Idle circle.
    ctx.beginPath();
    ctx.arc(cx, cy, layout.params.idle_radius_px * s, 0, 2 * Math.PI);
    ctx.strokeStyle = "#2c3644";
    ctx.lineWidth = 1.5;
    ctx.stroke();

    // Keys.
    for (const cluster of layout.clusters) {
      const faded = view.clusterFaded(cluster.index);
      for (const key of cluster.keys) {
        this.drawKey(view, key, nowMs, faded);
      }
    }

    // Gray circle marker on the most recent selection.
    const sel = view.lastSelection;
    if (sel !== null && nowMs - sel.tMs < SELECTION_MARKER_MS) {
      const [mx, my] = this.toCanvas(view, sel.position);
      ctx.beginPath();
      ctx.arc(mx, my, 26 * s, 0, 2 * Math.PI);
      ctx.strokeStyle = "rgba(190, 190, 190, 0.9)";
      ctx.lineWidth = 4;
      ctx.stroke();
    }

    // Typed text: current word in the idle area, finished words at the bottom.
    ctx.fillStyle = "#dde6f0";
    ctx.font = `${Math.round(26 * s * 2)}px monospace`;
    ctx.textAlign = "center";
    const prefix = view.buffer.endsWith(" ")
      ? ""
      : view.buffer.slice(view.buffer.lastIndexOf(" ") + 1);
    ctx.fillText(prefix, cx, cy + 8);
    ctx.font = `${Math.round(20 * s * 2)}px monospace`;
    ctx.fillStyle = "#9fb4c8";
    ctx.fillText(view.committedWords.join(" "), cx, this.canvas.height - 18);

    // Target phrase and live speed readout.
    ctx.textAlign = "left";
    ctx.font = "14px sans-serif";
    ctx.fillStyle = "#8899aa";
    if (view.targetPhrase) ctx.fillText(`phrase: ${view.targetPhrase}`, 16, 22);
    if (view.wpm !== null) ctx.fillText(`${view.wpm.toFixed(2)} wpm`, 16, 42);
    ctx.fillText(`session: ${view.status}`, 16, this.canvas.height - 40);
    if (view.calibrating) {
      ctx.fillStyle = "#e0c060";
      ctx.fillText("calibrating: fixate the center dot", 16, 62);
      ctx.beginPath();
      ctx.arc(cx, cy, 6, 0, 2 * Math.PI);
      ctx.fillStyle = "#e0c060";
      ctx.fill();
    }

    // Local cursor echo (mouse-as-gaze or trace replay).
    if (cursor !== null) {
      const [px, py] = this.toCanvas(view, cursor);
      ctx.beginPath();
      ctx.arc(px, py, 5, 0, 2 * Math.PI);
      ctx.fillStyle = "rgba(240, 120, 100, 0.8)";
      ctx.fill();
    }
  }

  private drawKey(view: ViewState, key: KeyDoc, nowMs: number, faded: boolean): void {
    const ctx = this.ctx;
    const s = this.scale(view);
    const [x, y] = this.toCanvas(view, view.keyRenderPosition(key, nowMs));
    const alpha = faded ? 0.25 : 1.0;
    const isArrow = key.id.startsWith("ARROW");
    const label = isArrow ? ARROW_GLYPHS[key.id] : key.id === "SP" ? "␣" : key.id;
    const shortened =
      view.layout !== null &&
      !isArrow &&
      view.topLetters.includes(key.id.toLowerCase()) === true;
    ctx.globalAlpha = alpha;
    ctx.beginPath();
    ctx.arc(x, y, 24 * s, 0, 2 * Math.PI);
    ctx.fillStyle = isArrow ? "#274060" : "#1d2835";
    ctx.fill();
    ctx.strokeStyle = shortened ? "#e0c060" : "#3c4c5e";
    ctx.lineWidth = shortened ? 2.5 : 1.2;
    ctx.stroke();
    ctx.fillStyle = "#e8eef4";
    ctx.font = `${Math.round(20 * s * 2)}px sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(label === "DEL" ? "⌫" : label, x, y);
    if (isArrow) {
      const word = view.arrowLabel(key);
      if (word) {
        ctx.font = `${Math.round(13 * s * 2)}px sans-serif`;
        ctx.fillStyle = "#9fd08a";
        ctx.fillText(word, x, y + 34 * s);
      }
    }
    ctx.globalAlpha = 1.0;
    ctx.textBaseline = "alphabetic";
  }
}
