"""Trial harness: task presets, attempt classification, logs and summaries.

An attempt is one depress/release cycle replayed through the session layer.
Success on the standard task means committing the target option after
previewing it; failures fall into four categories. The decision procedure is
versioned here because observed prototypes leave it underspecified:

1. UnintendedRelease: the cycle ended Aborted and the target's preview was
   never reached (includes quick aborted keypresses, which never enter
   one-press mode and log a zero-length transcript).
2. HardAsMediumMixup: an InvalidCommit directive occurred (a hard press
   fired while navigating, before any preview).
3. MediumAsHardMixup: the target's preview was reached but the cycle ended
   without committing the target (the final press registered medium, moving
   the cursor off target or dismissing the preview).
4. Other: anything else (e.g. committing the wrong option cleanly).

First match wins. Practice-stage presets reuse the same taxonomy minus rule 3,
which only means something with a fixed target.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .detector import (
    CLASSICAL_DEPRESS,
    CLASSICAL_RELEASE,
    HARD_REPEAT,
    MEDIUM_REPEAT,
    ONE_PRESS_ENTER,
    ONE_PRESS_RELEASE,
    KeyEventRecord,
    event_to_obj,
)
from .session import CycleRecord, InteractionSession
from .wytiwyg import (
    ABORTED,
    COMMITTED,
    MenuModel,
    MenuOption,
    WytiwygConfig,
    directive_to_obj,
)

__all__ = [
    "UNINTENDED_RELEASE",
    "HARD_AS_MEDIUM_MIXUP",
    "MEDIUM_AS_HARD_MIXUP",
    "OTHER",
    "CATEGORIES",
    "TaskSpec",
    "PRESETS",
    "AttemptOutcome",
    "TrialLog",
    "ClassificationError",
    "TrialInputError",
    "default_menu",
    "classify_attempt",
    "run_trial",
    "summarize",
    "aggregate",
    "format_summary_table",
    "write_trial_log",
    "perfect_attempt",
    "seventy_attempt_fixture",
    "FIXTURE_SCORES",
    "FIXTURE_FAILURES",
]

UNINTENDED_RELEASE = "UnintendedRelease"
HARD_AS_MEDIUM_MIXUP = "HardAsMediumMixup"
MEDIUM_AS_HARD_MIXUP = "MediumAsHardMixup"
OTHER = "Other"
CATEGORIES = (UNINTENDED_RELEASE, HARD_AS_MEDIUM_MIXUP, MEDIUM_AS_HARD_MIXUP, OTHER)

MODE_NAVIGATE = "navigate"
MODE_PREVIEW = "preview"
MODE_COMMIT_ANY = "commit-any"
MODE_COMMIT_TARGET = "commit-target"
MODES = (MODE_NAVIGATE, MODE_PREVIEW, MODE_COMMIT_ANY, MODE_COMMIT_TARGET)


class ClassificationError(ValueError):
    """An attempt transcript cannot be classified."""


class TrialInputError(ValueError):
    """Trial inputs do not satisfy the task's requirements."""


@dataclass(frozen=True)
class TaskSpec:
    """One trial task: menu size, target option, attempt count, success mode."""

    menu_size: int = 10
    target_index: int = 8
    attempts: int = 10
    mode: str = MODE_COMMIT_TARGET
    name: str = "target-task"

    def __post_init__(self) -> None:
        if self.menu_size < 1:
            raise ValueError(f"menu_size must be >= 1, got {self.menu_size}")
        if not 1 <= self.target_index <= self.menu_size:
            raise ValueError(
                f"target_index must be in [1, {self.menu_size}], got {self.target_index}"
            )
        if self.attempts < 1:
            raise ValueError(f"attempts must be >= 1, got {self.attempts}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


# tutorial ladder: each stage adds one skill; the last is the standard task
PRESETS: dict[str, TaskSpec] = {
    "navigate": TaskSpec(mode=MODE_NAVIGATE, name="navigate"),
    "preview": TaskSpec(mode=MODE_PREVIEW, name="preview"),
    "commit": TaskSpec(mode=MODE_COMMIT_ANY, name="commit"),
    "target-task": TaskSpec(mode=MODE_COMMIT_TARGET, name="target-task"),
}


@dataclass(frozen=True)
class AttemptOutcome:
    success: bool
    category: str | None
    cycle: CycleRecord

    def __post_init__(self) -> None:
        if self.success and self.category is not None:
            raise ValueError("successful attempts carry no failure category")
        if not self.success and self.category not in CATEGORIES:
            raise ValueError(f"failure category must be one of {CATEGORIES}")


@dataclass
class TrialLog:
    task: TaskSpec
    outcomes: list[AttemptOutcome]
    name: str = "trial"

    @property
    def score(self) -> int:
        return sum(1 for o in self.outcomes if o.success)

    def counts(self) -> dict[str, int]:
        hist = {cat: 0 for cat in CATEGORIES}
        for o in self.outcomes:
            if not o.success:
                hist[o.category] += 1
        return hist


def default_menu(n: int = 10) -> MenuModel:
    """A plain n-option menu for trials that don't specify a fixture."""
    return MenuModel(
        options=tuple(
            MenuOption(id=f"item-{i}", label=f"menu item {i}", preview=f"preview document {i}")
            for i in range(1, n + 1)
        )
    )


def classify_attempt(cycle: CycleRecord, task: TaskSpec, menu: MenuModel) -> AttemptOutcome:
    """Classify one complete cycle against the task's success rule."""
    if not cycle.one_press:
        # never entered one-press mode: a quick aborted keypress
        return AttemptOutcome(False, UNINTENDED_RELEASE, cycle)
    if not cycle.terminal:
        raise ClassificationError(
            f"incomplete transcript: cycle on '{cycle.key}' never reached a terminal phase "
            f"(Committed or Aborted); ended in '{cycle.final_state.phase}'"
        )

    target_id = menu.options[task.target_index - 1].id
    previewed_target = any(
        d.kind == "ShowPreview" and d.option_id == target_id for d in cycle.directives
    )
    previewed_any = any(d.kind == "ShowPreview" for d in cycle.directives)
    highlighted_any = any(d.kind == "Highlight" for d in cycle.directives)
    invalid_commit = any(d.kind == "InvalidCommit" for d in cycle.directives)
    committed = cycle.final_state.phase == COMMITTED
    committed_target = committed and cycle.final_state.committed_id == target_id

    if task.mode == MODE_NAVIGATE:
        achieved = highlighted_any
    elif task.mode == MODE_PREVIEW:
        achieved = previewed_any
    elif task.mode == MODE_COMMIT_ANY:
        achieved = committed
    else:
        achieved = committed_target and previewed_target
    if achieved:
        return AttemptOutcome(True, None, cycle)

    aborted = cycle.final_state.phase == ABORTED
    if task.mode == MODE_COMMIT_TARGET:
        if aborted and not previewed_target:
            category = UNINTENDED_RELEASE
        elif invalid_commit:
            category = HARD_AS_MEDIUM_MIXUP
        elif previewed_target:
            category = MEDIUM_AS_HARD_MIXUP
        else:
            category = OTHER
    else:
        if aborted:
            category = UNINTENDED_RELEASE
        elif invalid_commit:
            category = HARD_AS_MEDIUM_MIXUP
        else:
            category = OTHER
    return AttemptOutcome(False, category, cycle)


def _attempt_cycle(
    events: list[KeyEventRecord], menu: MenuModel, config: WytiwygConfig | None
) -> CycleRecord:
    session = InteractionSession(menu, config)
    for ev in events:
        session.handle_event(ev)
    cycles = session.finish()
    if not cycles:
        # no events at all: treat as a zero-length transcript
        return CycleRecord(key="", one_press=False)
    return cycles[0]


def run_trial(
    task: TaskSpec,
    sequences: list[list[KeyEventRecord]],
    menu: MenuModel | None = None,
    config: WytiwygConfig | None = None,
    name: str = "trial",
) -> TrialLog:
    """Classify exactly the first task.attempts sequences; extras are ignored."""
    if len(sequences) < task.attempts:
        raise TrialInputError(
            f"task '{task.name}' needs {task.attempts} attempt sequences, got {len(sequences)}"
        )
    menu = menu or default_menu(task.menu_size)
    if menu.n != task.menu_size:
        raise TrialInputError(
            f"menu has {menu.n} options but task '{task.name}' expects {task.menu_size}"
        )
    outcomes = []
    for seq in sequences[: task.attempts]:
        cycle = _attempt_cycle(seq, menu, config)
        outcomes.append(classify_attempt(cycle, task, menu))
    return TrialLog(task=task, outcomes=outcomes, name=name)


def _duration_ms(cycle: CycleRecord) -> int:
    if len(cycle.events) < 2:
        return 0
    return cycle.events[-1].t_ms - cycle.events[0].t_ms


def summarize(log: TrialLog) -> dict:
    """Order-independent stats for one log."""
    durations = [_duration_ms(o.cycle) for o in log.outcomes]
    total = sum(durations)
    return {
        "log": log.name,
        "task": log.task.name,
        "attempts": len(log.outcomes),
        "score": log.score,
        "failures": len(log.outcomes) - log.score,
        "histogram": log.counts(),
        "total_duration_ms": total,
        "mean_duration_ms": round(total / len(log.outcomes), 1) if log.outcomes else 0.0,
    }


def aggregate(summaries: list[dict]) -> dict:
    hist = {cat: sum(s["histogram"][cat] for s in summaries) for cat in CATEGORIES}
    attempts = sum(s["attempts"] for s in summaries)
    score = sum(s["score"] for s in summaries)
    total = sum(s["total_duration_ms"] for s in summaries)
    return {
        "logs": len(summaries),
        "attempts": attempts,
        "score": score,
        "failures": attempts - score,
        "histogram": hist,
        "mean_score": round(score / len(summaries), 4) if summaries else 0.0,
        "total_duration_ms": total,
    }


def write_trial_log(logs: list[TrialLog]) -> str:
    """JSONL log: one line per attempt with its full transcript."""
    lines = []
    for log in logs:
        for i, o in enumerate(log.outcomes, start=1):
            obj = {
                "log": log.name,
                "attempt": i,
                "task": log.task.name,
                "outcome": "success" if o.success else "failure",
                "category": o.category,
                "duration_ms": _duration_ms(o.cycle),
                "events": [event_to_obj(ev) for ev in o.cycle.events],
                "directives": [directive_to_obj(d) for d in o.cycle.directives],
            }
            lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + "\n" if lines else ""


def format_summary_table(summaries: list[dict]) -> str:
    """Fixed-column text table, one row per log plus a TOTAL row."""
    headers = ["log", "attempts", "score"] + list(CATEGORIES)
    name_w = max([len("TOTAL"), len(headers[0])] + [len(s["log"]) for s in summaries]) + 2
    widths = [name_w] + [max(len(h), 5) + 2 for h in headers[1:]]
    lines = [headers[0].ljust(widths[0]) + "".join(h.rjust(w) for h, w in zip(headers[1:], widths[1:]))]
    def row(name: str, attempts: int, score: int, hist: dict) -> str:
        cells = [str(attempts), str(score)] + [str(hist[c]) for c in CATEGORIES]
        return name.ljust(widths[0]) + "".join(c.rjust(w) for c, w in zip(cells, widths[1:]))
    for s in summaries:
        lines.append(row(s["log"], s["attempts"], s["score"], s["histogram"]))
    agg = aggregate(summaries)
    lines.append(row("TOTAL", agg["attempts"], agg["score"], agg["histogram"]))
    return "\n".join(lines) + "\n"


# -------------------------------------------------- attempt synthesis

_KEY = "space"
_ENTER_T = 500


def _one_press_events(
    mediums: list[tuple[int, float]],
    hard: tuple[int, float] | None,
    release_t: int,
    key: str = _KEY,
) -> list[KeyEventRecord]:
    events = [KeyEventRecord(_ENTER_T, key, ONE_PRESS_ENTER)]
    for t, apex in mediums:
        events.append(KeyEventRecord(t, key, MEDIUM_REPEAT, apex_n=apex))
    if hard is not None:
        events.append(KeyEventRecord(hard[0], key, HARD_REPEAT, apex_n=hard[1]))
    events.append(KeyEventRecord(release_t, key, ONE_PRESS_RELEASE))
    return events


def _medium_apex(rng: random.Random) -> float:
    return round(rng.uniform(1.35, 1.8), 3)


def _hard_apex(rng: random.Random) -> float:
    return round(rng.uniform(2.15, 2.7), 3)


def _navigate(rng: random.Random, presses: int, start: int = 800) -> tuple[list[tuple[int, float]], int]:
    """Medium press times spaced comfortably past the refractory period."""
    t = start
    mediums = []
    for _ in range(presses):
        mediums.append((t, _medium_apex(rng)))
        t += rng.randrange(260, 420, 20)
    return mediums, mediums[-1][0] if mediums else start


def perfect_attempt(
    rng: random.Random | None = None, target: int = 8, dwell_ms: int = 800
) -> list[KeyEventRecord]:
    """Navigate to the target, dwell for its preview, commit, release."""
    rng = rng or random.Random(0)
    mediums, last_t = _navigate(rng, target)
    hard_t = last_t + dwell_ms + rng.randrange(100, 240, 20)
    return _one_press_events(mediums, (hard_t, _hard_apex(rng)), hard_t + 200)


def _unintended_release_attempt(rng: random.Random, target: int) -> list[KeyEventRecord]:
    if rng.random() < 0.3:
        # quick aborted keypress: never enters one-press mode
        t0 = rng.randrange(100, 200, 10)
        return [
            KeyEventRecord(t0, _KEY, CLASSICAL_DEPRESS),
            KeyEventRecord(t0 + 70, _KEY, CLASSICAL_RELEASE),
        ]
    mediums, last_t = _navigate(rng, rng.randrange(2, target - 1))
    return _one_press_events(mediums, None, last_t + rng.randrange(120, 300, 20))


def _hard_as_medium_attempt(rng: random.Random, target: int, dwell_ms: int) -> list[KeyEventRecord]:
    """An early hard press (InvalidCommit) and a commit on the wrong option."""
    first_leg = rng.randrange(2, 5)
    mediums, last_t = _navigate(rng, first_leg)
    events = [KeyEventRecord(_ENTER_T, _KEY, ONE_PRESS_ENTER)]
    for t, apex in mediums:
        events.append(KeyEventRecord(t, _KEY, MEDIUM_REPEAT, apex_n=apex))
    stray_t = last_t + 300
    events.append(KeyEventRecord(stray_t, _KEY, HARD_REPEAT, apex_n=_hard_apex(rng)))
    # keep navigating to a non-target option, then commit it
    wrong = first_leg + 2 if first_leg + 2 != target else first_leg + 3
    extra, t = [], stray_t + 300
    for _ in range(wrong - first_leg):
        extra.append((t, _medium_apex(rng)))
        t += rng.randrange(260, 420, 20)
    for tt, apex in extra:
        events.append(KeyEventRecord(tt, _KEY, MEDIUM_REPEAT, apex_n=apex))
    commit_t = extra[-1][0] + dwell_ms + 150
    events.append(KeyEventRecord(commit_t, _KEY, HARD_REPEAT, apex_n=_hard_apex(rng)))
    events.append(KeyEventRecord(commit_t + 200, _KEY, ONE_PRESS_RELEASE))
    return events


def _medium_as_hard_attempt(rng: random.Random, target: int, dwell_ms: int) -> list[KeyEventRecord]:
    """Preview the target, then the commit press registers medium; bail out."""
    mediums, last_t = _navigate(rng, target)
    slip_t = last_t + dwell_ms + rng.randrange(120, 260, 20)
    mediums.append((slip_t, _medium_apex(rng)))
    return _one_press_events(mediums, None, slip_t + rng.randrange(200, 400, 20))


def _other_attempt(rng: random.Random, target: int, dwell_ms: int) -> list[KeyEventRecord]:
    """Cleanly commit the wrong option without ever previewing the target."""
    wrong = rng.choice([i for i in (3, 5, 6) if i != target])
    mediums, last_t = _navigate(rng, wrong)
    hard_t = last_t + dwell_ms + 150
    return _one_press_events(mediums, (hard_t, _hard_apex(rng)), hard_t + 200)


_BUILDERS = {
    UNINTENDED_RELEASE: _unintended_release_attempt,
    HARD_AS_MEDIUM_MIXUP: _hard_as_medium_attempt,
    MEDIUM_AS_HARD_MIXUP: _medium_as_hard_attempt,
    OTHER: _other_attempt,
}

# seeded split: scores 5..9 averaging 52/7 ~= 7.43; 18 failures across the
# four categories (8 / 4 / 4 / 2)
FIXTURE_FAILURES: dict[str, list[str]] = {
    "subject_1": [UNINTENDED_RELEASE],
    "subject_2": [UNINTENDED_RELEASE, HARD_AS_MEDIUM_MIXUP],
    "subject_3": [UNINTENDED_RELEASE, MEDIUM_AS_HARD_MIXUP],
    "subject_4": [UNINTENDED_RELEASE, HARD_AS_MEDIUM_MIXUP, MEDIUM_AS_HARD_MIXUP],
    "subject_5": [UNINTENDED_RELEASE, HARD_AS_MEDIUM_MIXUP, OTHER],
    "subject_6": [UNINTENDED_RELEASE, MEDIUM_AS_HARD_MIXUP],
    "subject_7": [
        UNINTENDED_RELEASE,
        UNINTENDED_RELEASE,
        HARD_AS_MEDIUM_MIXUP,
        MEDIUM_AS_HARD_MIXUP,
        OTHER,
    ],
}
FIXTURE_SCORES = {name: 10 - len(fails) for name, fails in FIXTURE_FAILURES.items()}


def seventy_attempt_fixture(
    seed: int = 1008, target: int = 8, dwell_ms: int = 800
) -> dict[str, list[list[KeyEventRecord]]]:
    """Seven simulated 10-attempt logs with exactly 18 seeded failures."""
    rng = random.Random(seed)
    fixture: dict[str, list[list[KeyEventRecord]]] = {}
    for name, failures in FIXTURE_FAILURES.items():
        slots = rng.sample(range(10), len(failures))
        plan: dict[int, str] = dict(zip(slots, failures))
        attempts = []
        for i in range(10):
            if i in plan:
                builder = _BUILDERS[plan[i]]
                if plan[i] == UNINTENDED_RELEASE:
                    attempts.append(builder(rng, target))
                else:
                    attempts.append(builder(rng, target, dwell_ms))
            else:
                attempts.append(perfect_attempt(rng, target, dwell_ms))
        fixture[name] = attempts
    return fixture
