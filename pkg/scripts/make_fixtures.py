#!/usr/bin/env python3
"""Regenerate the 70-attempt trial fixture under fixtures/trials/seventy/.

Seven simulated subjects, ten attempts each, with a seeded split of exactly
18 failures across the four categories. The split itself is data the tests
assert on, so regenerate only deliberately.
"""
from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from onepress.detector import events_to_jsonl
from onepress.trial import seventy_attempt_fixture

ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), ".."))
OUT = os.path.join(ROOT, "fixtures", "trials", "seventy")


def main() -> int:
    fixture = seventy_attempt_fixture()
    for subject, attempts in fixture.items():
        subject_dir = os.path.join(OUT, subject)
        os.makedirs(subject_dir, exist_ok=True)
        for i, events in enumerate(attempts, start=1):
            path = os.path.join(subject_dir, f"attempt_{i:02d}.jsonl")
            with open(path, "w", encoding="utf-8") as fp:
                fp.write(events_to_jsonl(events))
        print(f"{subject}: {len(attempts)} attempts")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
