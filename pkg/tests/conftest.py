import random
from pathlib import Path

import pytest

from onepress.signals import PressScript, Segment

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

# one line per acceptance criterion, printed after the run (see the
# pytest_terminal_summary hook below)
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_script(rng: random.Random, key: str = "space") -> PressScript:
    """An arbitrary but well-formed press script for corpus-style tests."""
    segs = []
    for _ in range(rng.randint(1, 6)):
        kind = rng.choice(["idle", "soft_hold", "peak", "quick_strike"])
        if kind == "idle":
            segs.append(Segment(kind="idle", duration_ms=rng.randrange(100, 600, 10)))
        elif kind == "soft_hold":
            segs.append(
                Segment(
                    kind="soft_hold",
                    duration_ms=rng.randrange(300, 1500, 10),
                    target_force_n=round(rng.uniform(0.65, 1.1), 2),
                )
            )
        elif kind == "peak":
            if not segs or segs[-1].kind not in ("soft_hold", "peak"):
                segs.append(Segment(kind="soft_hold", duration_ms=600, target_force_n=0.8))
            segs.append(
                Segment(
                    kind="peak",
                    duration_ms=rng.randrange(200, 500, 20),
                    target_force_n=round(rng.uniform(1.3, 2.9), 2),
                    rise_ms=rng.randrange(40, 120, 20),
                    fall_ms=rng.randrange(40, 120, 20),
                )
            )
        else:
            segs.append(
                Segment(
                    kind="quick_strike",
                    duration_ms=rng.randrange(100, 400, 10),
                    target_force_n=round(rng.uniform(0.7, 2.6), 2),
                    rise_ms=40,
                    fall_ms=40,
                )
            )
    return PressScript(key=key, segments=tuple(segs))


def fixture_path(*parts: str) -> Path:
    return FIXTURES.joinpath(*parts)


def golden_path(name: str) -> Path:
    return GOLDEN / name


def read_file(path) -> str:
    return Path(path).read_text(encoding="utf-8")


@pytest.fixture
def three_event_script() -> PressScript:
    return PressScript(
        key="space",
        segments=(
            Segment(kind="soft_hold", duration_ms=700, target_force_n=0.8),
            Segment(kind="peak", duration_ms=400, target_force_n=1.6),
            Segment(kind="peak", duration_ms=400, target_force_n=2.4),
            Segment(kind="idle", duration_ms=200),
        ),
    )
