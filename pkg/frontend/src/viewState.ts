// Pure view model fed exclusively by server messages. It holds no selection
// logic of its own: disconnecting the renderer can never change what the
// server decides.

import { keyPositionAt, lpTravel } from "./kinematics.js";
import type { KeyDoc, LayoutDoc, ServerMessage } from "./types.js";

export interface SelectionMarker {
  keyId: string;
  position: [number, number];
  tMs: number;
}

export type SessionStatus = "connecting" | "connected" | "reconnecting" | "closed";

export class ViewState {
  sessionId: string | null = null;
  layout: LayoutDoc | null = null;
  status: SessionStatus = "connecting";
  calibrating = false;

  highlightedCluster: number | null = null;
  movingCluster: number | null = null;
  movementOnsetT = 0;

  slots: { up: string; left: string; right: string } = { up: "", left: "", right: "" };
  topLetters: string[] = [];
  buffer = "";
  committedWords: string[] = [];
  targetPhrase = "";

  wpm: number | null = null;
  lastSelection: SelectionMarker | null = null;
  // Set true by KeySelected; the UI plays a beep and clears the flag.
  beepPending = false;
  lastError: string | null = null;
  lastSampleT = 0;

  apply(msg: ServerMessage): void {
    switch (msg.type) {
      case "layout":
        this.sessionId = msg.session_id;
        this.layout = msg.layout;
        break;
      case "predictions":
        this.slots = msg.slots;
        this.topLetters = msg.top_letters;
        this.buffer = msg.buffer;
        this.committedWords = msg.buffer.split(" ").filter((w) => w.length > 0);
        if (msg.buffer.length > 0 && !msg.buffer.endsWith(" ")) {
          this.committedWords.pop();
        }
        break;
      case "metrics":
        this.wpm = msg.wpm;
        break;
      case "error":
        this.lastError = msg.message;
        break;
      case "event":
        this.applyEvent(msg.kind, msg.payload, msg.t_ms);
        break;
    }
  }

  private applyEvent(kind: string, payload: unknown, tMs: number): void {
    switch (kind) {
      case "ClusterHighlighted":
        this.highlightedCluster = payload as number;
        break;
      case "HighlightCleared":
        this.highlightedCluster = null;
        break;
      case "MovementStarted":
        this.movingCluster = payload as number;
        this.movementOnsetT = tMs;
        break;
      case "KeySelected": {
        const keyId = payload as string;
        const key = this.findKey(keyId);
        if (key !== null && this.layout !== null) {
          const travel = lpTravel(this.layout, key, this.topLetters);
          this.lastSelection = {
            keyId,
            position: keyPositionAt(key, Number.POSITIVE_INFINITY, this.layout.params, travel),
            tMs,
          };
        }
        this.beepPending = true;
        this.endMovement();
        break;
      }
      case "NoSelection":
      case "ResetToIdle":
        this.endMovement();
        break;
      case "CalibrationStarted":
        this.calibrating = true;
        break;
      case "CalibrationComplete":
        this.calibrating = false;
        break;
      case "PhraseStarted":
        this.targetPhrase = String(payload);
        this.buffer = "";
        this.committedWords = [];
        this.wpm = null;
        break;
    }
  }

  private endMovement(): void {
    this.movingCluster = null;
    this.highlightedCluster = null;
  }

  findKey(keyId: string): KeyDoc | null {
    if (this.layout === null) return null;
    for (const cluster of this.layout.clusters) {
      for (const key of cluster.keys) {
        if (key.id === keyId) return key;
      }
    }
    return null;
  }

  // Animated position of a key at client time `nowMs` (same clock that
  // timestamps the outgoing gaze samples).
  keyRenderPosition(key: KeyDoc, nowMs: number): [number, number] {
    if (this.layout === null) return key.home_position;
    if (this.movingCluster !== key.cluster_index) {
      return key.home_position;
    }
    const travel = lpTravel(this.layout, key, this.topLetters);
    return keyPositionAt(key, nowMs - this.movementOnsetT, this.layout.params, travel);
  }

  // Non-selected clusters fade while another cluster is moving.
  clusterFaded(clusterIndex: number): boolean {
    return this.movingCluster !== null && this.movingCluster !== clusterIndex;
  }

  arrowLabel(key: KeyDoc): string {
    if (key.id === "ARROW_UP") return this.slots.up;
    if (key.id === "ARROW_LEFT") return this.slots.left;
    if (key.id === "ARROW_RIGHT") return this.slots.right;
    return "";
  }
}
