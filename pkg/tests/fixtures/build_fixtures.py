"""Regenerate the stored fixture traces. The committed files are the reference."""

import json
from pathlib import Path

HERE = Path(__file__).parent


def write(name, records, meta=None):
    lines = []
    if meta is not None:
        lines.append(json.dumps({"meta": meta}, separators=(",", ":")))
    lines += [json.dumps(r, separators=(",", ":")) for r in records]
    (HERE / name).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def distance(value, n=60):
    return [{"t": float(i), "kind": "viewing_distance", "m": value} for i in range(n)]


def audio(volume, playing, n=60):
    return [{"t": float(i), "kind": "audio", "playing": playing, "volume": volume, "output": "speaker"}
            for i in range(n)]


def presses(times):
    return [{"t": t, "kind": "button", "button": "side"} for t in times]


def setting(feature, t, enabled=True):
    return {"t": t, "kind": "setting", "feature": feature, "enabled": enabled}


def main():
    write("font_050.jsonl", distance(0.50))
    write("font_040.jsonl", distance(0.40))
    write("volume_085_playing.jsonl", audio(0.85, True))
    write("volume_060_playing.jsonl", audio(0.60, True))
    write("volume_085_paused.jsonl", audio(0.85, False))
    write("click_020.jsonl", presses([10.0, 10.2]))
    write("click_040.jsonl", presses([10.0, 10.4]))
    write("click_070.jsonl", presses([10.0, 10.7]))
    write("click_triple.jsonl", presses([10.0, 10.3, 10.6]))
    write("magnifier.jsonl", [
        {"t": 0.0, "kind": "ui_action", "action": "photo_captured", "app": "Camera"},
        {"t": 10.0, "kind": "ui_action", "action": "photo_opened", "app": "Photos"},
        {"t": 15.0, "kind": "ui_action", "action": "pinch_zoom", "app": "Photos"},
    ], meta={"session_id": "magnifier-workaround"})
    pairs = [("assistive_touch", "side_button"), ("closed_captioning", "type_to_siri"), ("bold_text", "larger_text")]
    for antecedent, consequent in pairs:
        write(f"group_{antecedent}.jsonl", [setting(antecedent, 5.0)])
        write(f"group_{antecedent}_suppressed.jsonl", [setting(consequent, 1.0), setting(antecedent, 2.0)])
    # pooled mean 0.36 m and sample stddev 0.049 m: 0.36 + 0.049 * (-1, 0, 1)
    write("calibration_published.jsonl", [
        {"t": 0.0, "kind": "viewing_distance", "m": 0.311},
        {"t": 1.0, "kind": "viewing_distance", "m": 0.36},
        {"t": 2.0, "kind": "viewing_distance", "m": 0.409},
    ])
    write("calibration_constant.jsonl", distance(0.36, 20))
    write("empty.jsonl", [])
    (HERE / "profile_high_volume.json").write_text(json.dumps(
        {"volume": {"mean": 0.9, "stddev": 0.05, "playing_prob": 1.0}}, indent=2) + "\n")
    (HERE / "profile_baseline.json").write_text(json.dumps(
        {"distance": {"mean": 0.36, "stddev": 0.049}}, indent=2) + "\n")


if __name__ == "__main__":
    main()
