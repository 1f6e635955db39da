// Parity with the server geometry: every fixture sample (exported by the
// server implementation) must be reproduced within 1 px.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { keyPositionAt, lpTravel } from "../src/kinematics.js";
import type { KeyDoc, LayoutDoc } from "../src/types.js";

interface FixtureSample {
  key: string;
  travel_px: number;
  elapsed_ms: number;
  x: number;
  y: number;
}

interface FixtureCase {
  layout: LayoutDoc;
  samples: FixtureSample[];
}

const fixture = JSON.parse(
  readFileSync(new URL("./fixtures/kinematics.json", import.meta.url), "utf-8")
) as { cases: FixtureCase[] };

function keyById(layout: LayoutDoc, id: string): KeyDoc {
  for (const cluster of layout.clusters) {
    for (const key of cluster.keys) {
      if (key.id === id) return key;
    }
  }
  throw new Error(`no key ${id}`);
}

describe("kinematics parity with the server", () => {
  it("has fixture cases", () => {
    expect(fixture.cases.length).toBeGreaterThan(0);
  });

  for (const c of fixture.cases) {
    it(`matches ${c.layout.variant}/${c.layout.revision} within 1 px`, () => {
      let worst = 0;
      for (const s of c.samples) {
        const key = keyById(c.layout, s.key);
        const [x, y] = keyPositionAt(key, s.elapsed_ms, c.layout.params, s.travel_px);
        worst = Math.max(worst, Math.hypot(x - s.x, y - s.y));
      }
      expect(worst).toBeLessThan(1.0);
      expect(worst).toBeLessThan(1e-6); // in practice the math is identical
    });
  }

  it("applies the travel-shortening rule like the server", () => {
    const layout = fixture.cases.find((c) => c.layout.variant === "L_WP")!.layout;
    const e = keyById(layout, "E");
    expect(lpTravel(layout, e, ["e", "a", "i", "o"])).toBe(layout.params.lp_move_distance_px);
    // Two predicted letters in one cluster: nobody shortens.
    const a = keyById(layout, "A");
    expect(lpTravel(layout, a, ["a", "b", "x", "y"])).toBe(layout.params.move_distance_px);
    const arrow = keyById(layout, "ARROW_UP");
    expect(lpTravel(layout, arrow, ["a", "b", "c", "d"])).toBe(layout.params.arrow_distance_px);
  });
});
