// Key movement geometry, kept in lockstep with the server implementation
// (tests/fixtures/kinematics.json is exported by the server and must match
// within 1 px).

import type { KeyDoc, LayoutDoc, ParamsDoc } from "./types.js";

export function unitVector(angleDeg: number): [number, number] {
  const rad = (angleDeg * Math.PI) / 180;
  // Mathematical angles on a screen whose y axis grows downward.
  return [Math.cos(rad), -Math.sin(rad)];
}

export function keyPositionAt(
  key: KeyDoc,
  elapsedMs: number,
  params: ParamsDoc,
  travelPx?: number
): [number, number] {
  const travel = travelPx ?? key.travel_px;
  const dist = Math.min((params.move_speed_px_s * Math.max(elapsedMs, 0)) / 1000, travel);
  const [ux, uy] = unitVector(key.trajectory_angle_deg);
  return [key.home_position[0] + dist * ux, key.home_position[1] + dist * uy];
}

export function keyLetter(key: KeyDoc): string | null {
  return key.id.length === 1 ? key.id.toLowerCase() : null;
}

// Travel shortening mirror: a letter travels the reduced distance iff it is
// predicted and it is the only predicted letter in its cluster.
export function lpTravel(layout: LayoutDoc, key: KeyDoc, topLetters: string[]): number {
  const params = layout.params;
  if (key.id.startsWith("ARROW")) return params.arrow_distance_px;
  if (layout.variant === "NoP") return params.move_distance_px;
  const letter = keyLetter(key);
  if (letter === null || !topLetters.includes(letter)) return params.move_distance_px;
  const cluster = layout.clusters[key.cluster_index];
  const predictedHere = cluster.keys.filter((k) => {
    const l = keyLetter(k);
    return l !== null && topLetters.includes(l);
  }).length;
  return predictedHere === 1 ? params.lp_move_distance_px : params.move_distance_px;
}
