#!/usr/bin/env python3
"""Regenerate the golden files under tests/golden/.

Traces come from the noiseless synthesizer; the event streams are produced by
the whole-trace reference detector (the oracle), never by the streaming
detector the tests are checking. Directive goldens replay those oracle events
through the menu engine. Run from the repository root after any intentional
behavior change, and review the diff before committing.
"""
from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from onepress.detector import events_to_jsonl
from onepress.gateway import packaged_menu
from onepress.reference import reference_detect
from onepress.session import run_events
from onepress.signals import load_script, synthesize_trace, write_trace
from onepress.wytiwyg import directive_to_json

ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), ".."))
GOLDEN = os.path.join(ROOT, "tests", "golden")
SCRIPTS = ("firm_strike", "soft_tap", "soft_hold", "three_event", "perfect_attempt")


def main() -> int:
    os.makedirs(GOLDEN, exist_ok=True)
    menu = packaged_menu()
    for name in SCRIPTS:
        script = load_script(os.path.join(ROOT, "fixtures", "scripts", f"{name}.yaml"))
        samples = synthesize_trace(script, seed=0)
        events = reference_detect(samples)
        with open(os.path.join(GOLDEN, f"{name}.trace.csv"), "w", encoding="utf-8") as fp:
            fp.write(write_trace(samples))
        with open(os.path.join(GOLDEN, f"{name}.events.jsonl"), "w", encoding="utf-8") as fp:
            fp.write(events_to_jsonl(events))
        directives, _ = run_events(events, menu)
        with open(os.path.join(GOLDEN, f"{name}.directives.jsonl"), "w", encoding="utf-8") as fp:
            fp.write("".join(directive_to_json(d) + "\n" for d in directives))
        print(f"wrote goldens for {name}: {len(samples)} samples, {len(events)} events")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
