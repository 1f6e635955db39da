"""Export a kinematics parity fixture for the browser client tests.

Writes frontend/tests/fixtures/kinematics.json: a full layout snapshot
plus key positions sampled at several elapsed times (including shortened
and arrow travels), computed by the server-side geometry. The TypeScript
renderer must reproduce these within 1 px.
"""

from __future__ import annotations

import json
from pathlib import Path

from pursuitkb.layout import build_layout, key_position_at, layout_to_dict

ELAPSED_MS = [0.0, 50.0, 133.33, 250.0, 376.0, 412.0, 564.0, 814.0, 1200.0]


def main() -> None:
    cases = []
    for variant, revision in (("NoP", "exp1"), ("L_WP", "exp1"), ("L_WP", "exp2")):
        layout = build_layout(variant, revision)
        samples = []
        for cluster in layout.clusters:
            for key in cluster.keys:
                travels = {key.travel_px}
                if key.letter is not None and variant != "NoP":
                    travels.add(layout.params.lp_move_distance_px)
                for travel in sorted(travels):
                    for ms in ELAPSED_MS:
                        x, y = key_position_at(key, ms, layout.params, travel_px=travel)
                        samples.append(
                            {
                                "key": key.id,
                                "travel_px": travel,
                                "elapsed_ms": ms,
                                "x": x,
                                "y": y,
                            }
                        )
        cases.append({"layout": layout_to_dict(layout), "samples": samples})
    out = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    path = out / "kinematics.json"
    path.write_text(json.dumps({"cases": cases}, indent=1) + "\n", encoding="utf-8")
    total = sum(len(c["samples"]) for c in cases)
    print(f"wrote {total} samples for {len(cases)} layouts to {path}")


if __name__ == "__main__":
    main()
