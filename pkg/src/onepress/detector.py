"""Streaming per-key force-event detector.

Classical key behaviour is recreated transparently: a strike that leaves the
soft band before the hold timeout emits ClassicalDepress (and later
ClassicalRelease), a quick soft tap emits the deferred pair at its release
sample. A soft hold that outlasts the timeout without leaving the band enters
one-press mode instead; no classical depress is ever emitted for that cycle.
Inside one-press mode, pressing is treated as atomic: a peak opens when the
first-order derivative of the smoothed force exceeds the onset slope and
commits at its apex (first non-positive derivative), labeled MediumRepeat or
HardRepeat by apex amplitude alone.

Per-key phase graph::

    Idle -> Contact -> ClassicalDown -> Idle            firm strike, release
    Idle -> Contact -> Idle                             quick soft tap (pair at release)
    Idle -> Contact -> Baseline                         hold timeout, one-press entered
    Baseline <-> PeakCandidate -> Refractory -> Baseline
    Baseline | PeakCandidate | Refractory -> Idle       release ends one-press mode

Smoothing is a trailing moving average over the last `smooth_window_samples`
samples; the derivative is a two-point finite difference scaled to N/s. All
timing comes from sample timestamps; the detector never reads a clock, so a
replayed stream reproduces its events exactly.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field

from .signals import ForceSample

__all__ = [
    "CLASSICAL_DEPRESS",
    "CLASSICAL_RELEASE",
    "ONE_PRESS_ENTER",
    "MEDIUM_REPEAT",
    "HARD_REPEAT",
    "ONE_PRESS_RELEASE",
    "EVENT_KINDS",
    "PEAK_KINDS",
    "DetectorConfig",
    "KeyEventRecord",
    "NonMonotonicSampleError",
    "EventFormatError",
    "classify_apex",
    "Detector",
    "detect_events",
    "event_to_obj",
    "event_to_json",
    "events_to_jsonl",
    "parse_events_jsonl",
]

CLASSICAL_DEPRESS = "ClassicalDepress"
CLASSICAL_RELEASE = "ClassicalRelease"
ONE_PRESS_ENTER = "OnePressEnter"
MEDIUM_REPEAT = "MediumRepeat"
HARD_REPEAT = "HardRepeat"
ONE_PRESS_RELEASE = "OnePressRelease"

EVENT_KINDS = (
    CLASSICAL_DEPRESS,
    CLASSICAL_RELEASE,
    ONE_PRESS_ENTER,
    MEDIUM_REPEAT,
    HARD_REPEAT,
    ONE_PRESS_RELEASE,
)
PEAK_KINDS = (MEDIUM_REPEAT, HARD_REPEAT)

# per-key phases (Baseline/PeakCandidate/Refractory are one-press sub-phases)
IDLE = "idle"
CONTACT = "contact"
CLASSICAL_DOWN = "classical_down"
BASELINE = "baseline"
PEAK_CANDIDATE = "peak_candidate"
REFRACTORY = "refractory"

ONE_PRESS_PHASES = (BASELINE, PEAK_CANDIDATE, REFRACTORY)


class NonMonotonicSampleError(ValueError):
    """A sample's timestamp does not advance past the previous one for its key."""


class EventFormatError(ValueError):
    """A serialized event stream is malformed."""


@dataclass(frozen=True)
class DetectorConfig:
    """Detection thresholds and timing, all in Newtons / milliseconds.

    The threshold chain must satisfy
    usable_floor < soft_band_max <= medium_min_apex < hard_min_apex <= usable_ceiling,
    and release_floor must sit below the usable floor so release hysteresis
    never fights the contact threshold.
    """

    usable_floor_n: float = 0.6
    usable_ceiling_n: float = 3.0
    soft_band_max_n: float = 1.2
    hold_timeout_ms: int = 500
    smooth_window_samples: int = 3
    onset_slope_n_per_s: float = 4.0
    medium_min_apex_n: float = 1.2
    hard_min_apex_n: float = 2.0
    refractory_ms: int = 120
    release_floor_n: float = 0.1

    def __post_init__(self) -> None:
        if not (
            self.usable_floor_n
            < self.soft_band_max_n
            <= self.medium_min_apex_n
            < self.hard_min_apex_n
            <= self.usable_ceiling_n
        ):
            raise ValueError(
                "require usable_floor_n < soft_band_max_n <= medium_min_apex_n "
                "< hard_min_apex_n <= usable_ceiling_n, got "
                f"{self.usable_floor_n}, {self.soft_band_max_n}, "
                f"{self.medium_min_apex_n}, {self.hard_min_apex_n}, {self.usable_ceiling_n}"
            )
        if self.hold_timeout_ms <= 0:
            raise ValueError(f"hold_timeout_ms must be > 0, got {self.hold_timeout_ms}")
        if self.refractory_ms < 0:
            raise ValueError(f"refractory_ms must be >= 0, got {self.refractory_ms}")
        if self.smooth_window_samples < 1:
            raise ValueError(f"smooth_window_samples must be >= 1, got {self.smooth_window_samples}")
        if not 0 <= self.release_floor_n < self.usable_floor_n:
            raise ValueError(
                f"release_floor_n must be in [0, usable_floor_n), got {self.release_floor_n}"
            )
        if self.onset_slope_n_per_s <= 0:
            raise ValueError(f"onset_slope_n_per_s must be > 0, got {self.onset_slope_n_per_s}")


@dataclass(frozen=True)
class KeyEventRecord:
    """One detected key event; apex_n is set only on Medium/HardRepeat."""

    t_ms: int
    key: str
    kind: str
    apex_n: float | None = None


def classify_apex(apex_n: float, config: DetectorConfig) -> str | None:
    """Label a committed apex amplitude; None below the medium band.

    Total over finite non-negative inputs; callers clamp anything above the
    usable ceiling before classification.
    """
    if apex_n >= config.hard_min_apex_n:
        return HARD_REPEAT
    if apex_n >= config.medium_min_apex_n:
        return MEDIUM_REPEAT
    return None


@dataclass
class _KeyState:
    window: deque = field(default_factory=deque)
    phase: str = IDLE
    last_t: int | None = None
    last_gap: int = 10  # fallback one-sample interval for stream closure
    smoothed: float | None = None
    contact_t: int = 0
    apex_v: float = 0.0
    apex_t: int = 0
    refractory_until: int = 0


class Detector:
    """Streaming detector over interleaved per-key force samples.

    Feed samples in nondecreasing time order per key; events come back in
    emission order with nondecreasing timestamps per key. Not thread-safe.
    """

    def __init__(self, config: DetectorConfig | None = None) -> None:
        self.config = config or DetectorConfig()
        self._keys: dict[str, _KeyState] = {}

    def phase(self, key: str) -> str:
        ks = self._keys.get(key)
        return ks.phase if ks else IDLE

    def feed_sample(self, sample: ForceSample) -> list[KeyEventRecord]:
        cfg = self.config
        ks = self._keys.get(sample.key)
        if ks is None:
            ks = _KeyState(window=deque(maxlen=cfg.smooth_window_samples))
            self._keys[sample.key] = ks
        if ks.last_t is not None and sample.t_ms <= ks.last_t:
            raise NonMonotonicSampleError(
                f"sample for key '{sample.key}' at t_ms={sample.t_ms} "
                f"does not advance past t_ms={ks.last_t}"
            )
        ks.window.append(sample.force_n)
        f_hat = sum(ks.window) / len(ks.window)
        if ks.last_t is None:
            deriv = None
        else:
            ks.last_gap = sample.t_ms - ks.last_t
            deriv = (f_hat - ks.smoothed) * 1000.0 / ks.last_gap
        events = self._advance(ks, sample.key, sample.t_ms, f_hat, deriv)
        ks.last_t = sample.t_ms
        ks.smoothed = f_hat
        return events

    def end_of_stream(self) -> list[KeyEventRecord]:
        """Close every open cycle as if force dropped below the release floor
        one sample interval after the key's last sample."""
        out: list[KeyEventRecord] = []
        for key in sorted(self._keys):
            ks = self._keys[key]
            if ks.phase == IDLE:
                continue
            closure_t = (ks.last_t or 0) + ks.last_gap
            if ks.phase == CONTACT:
                out.append(KeyEventRecord(closure_t, key, CLASSICAL_DEPRESS))
                out.append(KeyEventRecord(closure_t, key, CLASSICAL_RELEASE))
            elif ks.phase == CLASSICAL_DOWN:
                out.append(KeyEventRecord(closure_t, key, CLASSICAL_RELEASE))
            else:
                if ks.phase == PEAK_CANDIDATE:
                    # the synthetic drop is a non-positive derivative: commit first
                    out.extend(self._commit_peak(ks, key))
                out.append(KeyEventRecord(closure_t, key, ONE_PRESS_RELEASE))
            ks.phase = IDLE
            ks.window.clear()
            ks.smoothed = None
        return out

    def _commit_peak(self, ks: _KeyState, key: str) -> list[KeyEventRecord]:
        cfg = self.config
        apex = min(ks.apex_v, cfg.usable_ceiling_n)
        kind = classify_apex(apex, cfg)
        if kind is None:
            # sub-threshold wiggle: stay silent and rearm immediately. The
            # refractory gap separates emitted events only; spending it on
            # noise wiggles would shadow the onset of a real press.
            ks.phase = BASELINE
            return []
        ks.phase = REFRACTORY
        ks.refractory_until = ks.apex_t + cfg.refractory_ms
        return [KeyEventRecord(ks.apex_t, key, kind, apex_n=apex)]

    def _advance(
        self, ks: _KeyState, key: str, t: int, f_hat: float, deriv: float | None
    ) -> list[KeyEventRecord]:
        cfg = self.config
        out: list[KeyEventRecord] = []
        # a sample may cascade through several transitions (e.g. hold timeout
        # elapsing on a sample whose slope already opens a peak candidate)
        while True:
            if ks.phase == IDLE:
                if f_hat > cfg.release_floor_n:
                    ks.phase = CONTACT
                    ks.contact_t = t
                    continue
                return out
            if ks.phase == CONTACT:
                # firm strikes and quick taps must resolve strictly before the
                # hold timeout; at the boundary sample one-press entry wins
                if t - ks.contact_t >= cfg.hold_timeout_ms:
                    out.append(KeyEventRecord(t, key, ONE_PRESS_ENTER))
                    ks.phase = BASELINE
                    continue
                if f_hat > cfg.soft_band_max_n:
                    out.append(KeyEventRecord(t, key, CLASSICAL_DEPRESS))
                    ks.phase = CLASSICAL_DOWN
                elif f_hat < cfg.release_floor_n:
                    # quick soft tap: deferred classical pair lands on the release sample
                    out.append(KeyEventRecord(t, key, CLASSICAL_DEPRESS))
                    out.append(KeyEventRecord(t, key, CLASSICAL_RELEASE))
                    ks.phase = IDLE
                return out
            if ks.phase == CLASSICAL_DOWN:
                if f_hat < cfg.release_floor_n:
                    out.append(KeyEventRecord(t, key, CLASSICAL_RELEASE))
                    ks.phase = IDLE
                return out
            if ks.phase == BASELINE:
                if f_hat < cfg.release_floor_n:
                    out.append(KeyEventRecord(t, key, ONE_PRESS_RELEASE))
                    ks.phase = IDLE
                    return out
                if deriv is not None and deriv > cfg.onset_slope_n_per_s:
                    ks.phase = PEAK_CANDIDATE
                    ks.apex_v = f_hat
                    ks.apex_t = t
                return out
            if ks.phase == PEAK_CANDIDATE:
                if f_hat > ks.apex_v:
                    ks.apex_v = f_hat
                    ks.apex_t = t
                if deriv is not None and deriv <= 0.0:
                    out.extend(self._commit_peak(ks, key))
                    continue  # same sample may also release or expire refractory
                if f_hat < cfg.release_floor_n:
                    out.append(KeyEventRecord(t, key, ONE_PRESS_RELEASE))
                    ks.phase = IDLE
                return out
            if ks.phase == REFRACTORY:
                if f_hat < cfg.release_floor_n:
                    out.append(KeyEventRecord(t, key, ONE_PRESS_RELEASE))
                    ks.phase = IDLE
                    return out
                if t >= ks.refractory_until:
                    ks.phase = BASELINE
                    continue
                return out
            raise AssertionError(f"unknown phase {ks.phase!r}")


def detect_events(
    samples: list[ForceSample], config: DetectorConfig | None = None
) -> list[KeyEventRecord]:
    """Stream samples (re-ordered by (t_ms, key)) through a fresh Detector and
    close the stream."""
    det = Detector(config)
    events: list[KeyEventRecord] = []
    for s in sorted(samples, key=lambda s: (s.t_ms, s.key)):
        events.extend(det.feed_sample(s))
    events.extend(det.end_of_stream())
    return events


def event_to_obj(ev: KeyEventRecord) -> dict:
    # field order is fixed (t_ms, key, kind, apex_n); golden files are byte-exact
    obj: dict = {"t_ms": ev.t_ms, "key": ev.key, "kind": ev.kind}
    if ev.apex_n is not None:
        obj["apex_n"] = round(ev.apex_n, 6)
    return obj


def event_to_json(ev: KeyEventRecord) -> str:
    return json.dumps(event_to_obj(ev), separators=(",", ":"))


def events_to_jsonl(events: list[KeyEventRecord]) -> str:
    if not events:
        return ""
    return "\n".join(event_to_json(ev) for ev in events) + "\n"


def parse_events_jsonl(text: str) -> list[KeyEventRecord]:
    events: list[KeyEventRecord] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            raise EventFormatError(f"line {line_no}: blank line")
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise EventFormatError(f"line {line_no}: invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise EventFormatError(f"line {line_no}: expected an object")
        try:
            t_ms = obj["t_ms"]
            key = obj["key"]
            kind = obj["kind"]
        except KeyError as exc:
            raise EventFormatError(f"line {line_no}: missing field {exc}") from None
        if kind not in EVENT_KINDS:
            raise EventFormatError(f"line {line_no}: unknown event kind {kind!r}")
        if not isinstance(t_ms, int) or isinstance(t_ms, bool):
            raise EventFormatError(f"line {line_no}: t_ms must be an integer")
        if not isinstance(key, str) or not key:
            raise EventFormatError(f"line {line_no}: key must be a non-empty string")
        apex = obj.get("apex_n")
        if kind in PEAK_KINDS:
            if not isinstance(apex, (int, float)) or isinstance(apex, bool) or not math.isfinite(apex):
                raise EventFormatError(f"line {line_no}: {kind} requires a finite apex_n")
        elif apex is not None:
            raise EventFormatError(f"line {line_no}: apex_n is only valid on peak events")
        events.append(KeyEventRecord(t_ms=t_ms, key=key, kind=kind, apex_n=apex))
    return events
