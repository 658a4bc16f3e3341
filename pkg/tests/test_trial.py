"""Attempt classification rules, trial fixture, summaries, and log format."""
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onepress.detector import (
    CLASSICAL_DEPRESS,
    CLASSICAL_RELEASE,
    HARD_REPEAT,
    MEDIUM_REPEAT,
    ONE_PRESS_ENTER,
    ONE_PRESS_RELEASE,
    KeyEventRecord,
)
from onepress.session import CycleRecord, InteractionSession
from onepress.trial import (
    CATEGORIES,
    FIXTURE_FAILURES,
    FIXTURE_SCORES,
    HARD_AS_MEDIUM_MIXUP,
    MEDIUM_AS_HARD_MIXUP,
    OTHER,
    PRESETS,
    UNINTENDED_RELEASE,
    AttemptOutcome,
    ClassificationError,
    TaskSpec,
    TrialInputError,
    _BUILDERS,
    classify_attempt,
    default_menu,
    format_summary_table,
    perfect_attempt,
    run_trial,
    seventy_attempt_fixture,
    summarize,
    aggregate,
    write_trial_log,
)

TASK = TaskSpec()
MENU = default_menu(10)


def cycle_of(events):
    session = InteractionSession(MENU)
    for ev in events:
        session.handle_event(ev)
    cycles = session.finish()
    return cycles[0] if cycles else CycleRecord(key="", one_press=False)


def ev(t, kind, apex=None):
    return KeyEventRecord(t_ms=t, key="space", kind=kind, apex_n=apex)


def mediums(ts):
    return [ev(t, MEDIUM_REPEAT, 1.5) for t in ts]


# -------------------------------------------------- decision rules

def test_perfect_attempt_is_success():
    out = classify_attempt(cycle_of(perfect_attempt(random.Random(3))), TASK, MENU)
    assert out.success and out.category is None
    assert out.cycle.final_state.committed_id == "item-8"


def test_quick_classical_tap_is_unintended_release():
    events = [ev(100, CLASSICAL_DEPRESS), ev(170, CLASSICAL_RELEASE)]
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert (out.success, out.category) == (False, UNINTENDED_RELEASE)


def test_abort_mid_navigation_is_unintended_release():
    events = [ev(500, ONE_PRESS_ENTER)] + mediums([800, 1100, 1400]) + [
        ev(1600, ONE_PRESS_RELEASE)
    ]
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert out.category == UNINTENDED_RELEASE


def test_early_hard_press_is_hard_as_medium_mixup():
    # stray hard while navigating, then a clean commit of the wrong option
    events = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800, 1100])
        + [ev(1400, HARD_REPEAT, 2.4)]
        + mediums([1700, 2000])
        + [ev(2900, HARD_REPEAT, 2.4), ev(3100, ONE_PRESS_RELEASE)]
    )
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert out.category == HARD_AS_MEDIUM_MIXUP


def test_medium_slip_after_target_preview_is_medium_as_hard_mixup():
    # reach item 8, dwell past 800 ms, then the commit press lands medium
    events = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800 + 300 * i for i in range(8)])
        + mediums([3900])
        + [ev(4200, ONE_PRESS_RELEASE)]
    )
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert out.category == MEDIUM_AS_HARD_MIXUP


def test_clean_wrong_commit_is_other():
    events = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800, 1100, 1400])
        + [ev(2400, HARD_REPEAT, 2.4), ev(2600, ONE_PRESS_RELEASE)]
    )
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert out.category == OTHER
    assert out.cycle.final_state.committed_id == "item-3"


def test_rule_order_abort_beats_invalid_commit():
    # stray hard then release without the target preview: rule 1 wins
    events = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800, 1100])
        + [ev(1400, HARD_REPEAT, 2.4), ev(1700, ONE_PRESS_RELEASE)]
    )
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert out.category == UNINTENDED_RELEASE


def test_rule_order_invalid_commit_beats_target_preview():
    # stray hard early, later previews the target, commits past it: rule 2 wins
    events = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800, 1100])
        + [ev(1400, HARD_REPEAT, 2.4)]
        + mediums([1700 + 300 * i for i in range(6)])  # cursor now 8
        + mediums([4300])  # preview of 8 fired at 3300+800; slip to 9
        + [ev(5400, HARD_REPEAT, 2.4), ev(5600, ONE_PRESS_RELEASE)]
    )
    cycle = cycle_of(events)
    assert any(
        d.kind == "ShowPreview" and d.option_id == "item-8" for d in cycle.directives
    )
    out = classify_attempt(cycle, TASK, MENU)
    assert out.category == HARD_AS_MEDIUM_MIXUP


def test_incomplete_transcript_raises():
    events = [ev(500, ONE_PRESS_ENTER)] + mediums([800])
    with pytest.raises(ClassificationError, match="menu_open"):
        classify_attempt(cycle_of(events), TASK, MENU)


# -------------------------------------------------- practice modes

def test_navigate_mode_counts_any_highlight():
    task = PRESETS["navigate"]
    ok = [ev(500, ONE_PRESS_ENTER)] + mediums([800]) + [ev(1000, ONE_PRESS_RELEASE)]
    assert classify_attempt(cycle_of(ok), task, MENU).success
    bare = [ev(500, ONE_PRESS_ENTER), ev(700, ONE_PRESS_RELEASE)]
    out = classify_attempt(cycle_of(bare), task, MENU)
    assert out.category == UNINTENDED_RELEASE


def test_preview_mode_requires_any_preview():
    task = PRESETS["preview"]
    ok = [ev(500, ONE_PRESS_ENTER)] + mediums([800]) + [ev(2000, ONE_PRESS_RELEASE)]
    assert classify_attempt(cycle_of(ok), task, MENU).success  # dwell elapsed at 1600
    short = [ev(500, ONE_PRESS_ENTER)] + mediums([800]) + [ev(1200, ONE_PRESS_RELEASE)]
    assert classify_attempt(cycle_of(short), task, MENU).category == UNINTENDED_RELEASE


def test_commit_any_mode_accepts_wrong_option():
    task = PRESETS["commit"]
    events = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800, 1100, 1400])
        + [ev(2400, HARD_REPEAT, 2.4), ev(2600, ONE_PRESS_RELEASE)]
    )
    assert classify_attempt(cycle_of(events), task, MENU).success
    # same transcript under the standard task is a failure
    assert not classify_attempt(cycle_of(events), TASK, MENU).success


def test_practice_modes_never_use_rule_three():
    slip = (
        [ev(500, ONE_PRESS_ENTER)]
        + mediums([800 + 300 * i for i in range(8)])
        + mediums([3900])
        + [ev(4200, ONE_PRESS_RELEASE)]
    )
    out = classify_attempt(cycle_of(slip), PRESETS["commit"], MENU)
    assert out.category == UNINTENDED_RELEASE  # aborted, so rule 1; never rule 3


# -------------------------------------------------- builders as a property

@given(seed=st.integers(min_value=0, max_value=2_000), category=st.sampled_from(CATEGORIES))
@settings(max_examples=120, deadline=None)
def test_builders_always_hit_their_category(seed, category):
    rng = random.Random(seed)
    builder = _BUILDERS[category]
    events = builder(rng, 8) if category == UNINTENDED_RELEASE else builder(rng, 8, 800)
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert (out.success, out.category) == (False, category)


@given(seed=st.integers(min_value=0, max_value=2_000))
@settings(max_examples=80, deadline=None)
def test_perfect_attempt_always_succeeds(seed):
    events = perfect_attempt(random.Random(seed))
    out = classify_attempt(cycle_of(events), TASK, MENU)
    assert out.success


# -------------------------------------------------- trial running & fixture

def test_run_trial_validates_inputs():
    with pytest.raises(TrialInputError, match="needs 10"):
        run_trial(TASK, [perfect_attempt(random.Random(0))])
    with pytest.raises(TrialInputError, match="5 options"):
        run_trial(TASK, [perfect_attempt(random.Random(i)) for i in range(10)], menu=default_menu(5))


def test_run_trial_ignores_extra_sequences():
    seqs = [perfect_attempt(random.Random(i)) for i in range(12)]
    log = run_trial(TASK, seqs, name="s")
    assert len(log.outcomes) == 10
    assert log.score == 10


def test_seventy_attempt_fixture_split():
    fixture = seventy_attempt_fixture()
    assert sorted(fixture) == [f"subject_{i}" for i in range(1, 8)]
    total_failures = 0
    for name, seqs in fixture.items():
        log = run_trial(TASK, seqs, name=name)
        assert log.score == FIXTURE_SCORES[name], name
        failed = [o.category for o in log.outcomes if not o.success]
        assert sorted(failed) == sorted(FIXTURE_FAILURES[name]), name
        total_failures += len(failed)
    assert total_failures == 18


def test_fixture_is_deterministic():
    a = seventy_attempt_fixture()
    b = seventy_attempt_fixture()
    assert a == b
    assert seventy_attempt_fixture(seed=2) != a


# -------------------------------------------------- summaries & output

def make_logs():
    fixture = seventy_attempt_fixture()
    return [run_trial(TASK, seqs, name=name) for name, seqs in sorted(fixture.items())]


def test_summarize_fields():
    log = make_logs()[0]
    s = summarize(log)
    assert s["log"] == "subject_1"
    assert s["attempts"] == 10
    assert s["score"] == 9
    assert s["failures"] == 1
    assert sum(s["histogram"].values()) == 1
    assert s["total_duration_ms"] > 0
    assert s["mean_duration_ms"] == round(s["total_duration_ms"] / 10, 1)


def test_aggregate_is_order_independent():
    summaries = [summarize(log) for log in make_logs()]
    agg = aggregate(summaries)
    assert agg["attempts"] == 70
    assert agg["score"] == 52
    assert agg["failures"] == 18
    assert agg["histogram"] == {
        UNINTENDED_RELEASE: 8,
        HARD_AS_MEDIUM_MIXUP: 4,
        MEDIUM_AS_HARD_MIXUP: 4,
        OTHER: 2,
    }
    assert aggregate(list(reversed(summaries)))["histogram"] == agg["histogram"]


def test_format_summary_table():
    summaries = [summarize(log) for log in make_logs()]
    table = format_summary_table(summaries)
    lines = table.splitlines()
    assert lines[0].startswith("log")
    assert any(line.startswith("subject_7") for line in lines)
    assert lines[-1].startswith("TOTAL")
    assert lines[-1].split()[1:] == ["70", "52", "8", "4", "4", "2"]


def test_write_trial_log_jsonl_shape():
    log = make_logs()[4]  # subject_5 has all of UR / HaM / Other
    text = write_trial_log([log])
    rows = [json.loads(line) for line in text.splitlines()]
    assert len(rows) == 10
    for i, row in enumerate(rows, start=1):
        assert row["log"] == "subject_5"
        assert row["attempt"] == i
        assert row["task"] == "target-task"
        assert row["outcome"] in ("success", "failure")
        assert (row["outcome"] == "failure") == (row["category"] is not None)
        assert isinstance(row["events"], list) and row["events"]
        assert set(row["events"][0]) >= {"t_ms", "key", "kind"}
        assert isinstance(row["directives"], list)
    cats = [r["category"] for r in rows if r["category"]]
    assert sorted(cats) == sorted(FIXTURE_FAILURES["subject_5"])


def test_outcome_invariants():
    with pytest.raises(ValueError):
        AttemptOutcome(True, OTHER, CycleRecord(key="k", one_press=True))
    with pytest.raises(ValueError):
        AttemptOutcome(False, None, CycleRecord(key="k", one_press=True))
    with pytest.raises(ValueError):
        TaskSpec(target_index=11)
    with pytest.raises(ValueError):
        TaskSpec(mode="race")
