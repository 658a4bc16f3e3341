"""Whole-trace reference detector.

A deliberately plain batch re-implementation of the rules in
:mod:`onepress.detector`, kept as an independent cross-check: tests require
both paths to produce byte-identical serialized event streams over seeded
corpora. It precomputes the smoothed series and its derivative for the whole
trace, then walks phases array-style. Keep it rule-for-rule in lockstep with
the streaming detector but never share code between the two.
"""
from __future__ import annotations

from .detector import (
    BASELINE,
    CLASSICAL_DEPRESS,
    CLASSICAL_DOWN,
    CLASSICAL_RELEASE,
    CONTACT,
    HARD_REPEAT,
    IDLE,
    MEDIUM_REPEAT,
    ONE_PRESS_ENTER,
    ONE_PRESS_RELEASE,
    PEAK_CANDIDATE,
    REFRACTORY,
    DetectorConfig,
    KeyEventRecord,
    NonMonotonicSampleError,
)
from .signals import ForceSample

__all__ = ["reference_detect"]


def _smooth_series(forces: list[float], window: int) -> list[float]:
    out = []
    for i in range(len(forces)):
        lo = max(0, i - window + 1)
        out.append(sum(forces[lo : i + 1]) / (i - lo + 1))
    return out


def _derivative_series(ts: list[int], smoothed: list[float]) -> list[float | None]:
    out: list[float | None] = [None]
    for i in range(1, len(ts)):
        out.append((smoothed[i] - smoothed[i - 1]) * 1000.0 / (ts[i] - ts[i - 1]))
    return out


def _classify(apex: float, cfg: DetectorConfig) -> str | None:
    if apex >= cfg.hard_min_apex_n:
        return HARD_REPEAT
    if apex >= cfg.medium_min_apex_n:
        return MEDIUM_REPEAT
    return None


def _walk_key(
    key: str,
    positions: list[int],
    ts: list[int],
    forces: list[float],
    cfg: DetectorConfig,
) -> tuple[list[tuple[int, int, KeyEventRecord]], list[KeyEventRecord]]:
    """Returns (tagged in-stream events, closure events for end of stream)."""
    sm = _smooth_series(forces, cfg.smooth_window_samples)
    dv = _derivative_series(ts, sm)
    tagged: list[tuple[int, int, KeyEventRecord]] = []

    phase = IDLE
    contact_t = 0
    apex_v = 0.0
    apex_t = 0
    refractory_until = 0

    for i in range(len(ts)):
        t, f, d = ts[i], sm[i], dv[i]
        seq = 0

        def emit(kind: str, at_t: int, apex: float | None = None) -> None:
            nonlocal seq
            tagged.append((positions[i], seq, KeyEventRecord(at_t, key, kind, apex_n=apex)))
            seq += 1

        moved = True
        while moved:
            moved = False
            if phase == IDLE and f > cfg.release_floor_n:
                phase, contact_t, moved = CONTACT, t, True
            elif phase == CONTACT:
                if t - contact_t >= cfg.hold_timeout_ms:
                    emit(ONE_PRESS_ENTER, t)
                    phase, moved = BASELINE, True
                elif f > cfg.soft_band_max_n:
                    emit(CLASSICAL_DEPRESS, t)
                    phase = CLASSICAL_DOWN
                elif f < cfg.release_floor_n:
                    emit(CLASSICAL_DEPRESS, t)
                    emit(CLASSICAL_RELEASE, t)
                    phase = IDLE
            elif phase == CLASSICAL_DOWN:
                if f < cfg.release_floor_n:
                    emit(CLASSICAL_RELEASE, t)
                    phase = IDLE
            elif phase == BASELINE:
                if f < cfg.release_floor_n:
                    emit(ONE_PRESS_RELEASE, t)
                    phase = IDLE
                elif d is not None and d > cfg.onset_slope_n_per_s:
                    phase, apex_v, apex_t = PEAK_CANDIDATE, f, t
            elif phase == PEAK_CANDIDATE:
                if f > apex_v:
                    apex_v, apex_t = f, t
                if d is not None and d <= 0.0:
                    apex = min(apex_v, cfg.usable_ceiling_n)
                    label = _classify(apex, cfg)
                    if label is not None:
                        emit(label, apex_t, apex)
                        phase = REFRACTORY
                        refractory_until = apex_t + cfg.refractory_ms
                    else:
                        # silent wiggle rearms at once; refractory spaces
                        # emitted events only
                        phase = BASELINE
                    moved = True
                elif f < cfg.release_floor_n:
                    emit(ONE_PRESS_RELEASE, t)
                    phase = IDLE
            elif phase == REFRACTORY:
                if f < cfg.release_floor_n:
                    emit(ONE_PRESS_RELEASE, t)
                    phase = IDLE
                elif t >= refractory_until:
                    phase, moved = BASELINE, True

    closures: list[KeyEventRecord] = []
    if phase != IDLE:
        gap = ts[-1] - ts[-2] if len(ts) >= 2 else 10
        closure_t = ts[-1] + gap
        if phase == CONTACT:
            closures.append(KeyEventRecord(closure_t, key, CLASSICAL_DEPRESS))
            closures.append(KeyEventRecord(closure_t, key, CLASSICAL_RELEASE))
        elif phase == CLASSICAL_DOWN:
            closures.append(KeyEventRecord(closure_t, key, CLASSICAL_RELEASE))
        else:
            if phase == PEAK_CANDIDATE:
                apex = min(apex_v, cfg.usable_ceiling_n)
                label = _classify(apex, cfg)
                if label is not None:
                    closures.append(KeyEventRecord(apex_t, key, label, apex_n=apex))
            closures.append(KeyEventRecord(closure_t, key, ONE_PRESS_RELEASE))
    return tagged, closures


def reference_detect(
    samples: list[ForceSample], config: DetectorConfig | None = None
) -> list[KeyEventRecord]:
    """Batch-detect events over a complete trace, stream closure included.

    Matches ``detect_events`` event-for-event (and byte-for-byte once
    serialized): samples are taken in (t_ms, key) order and per-sample
    emission order is preserved in the merged result.
    """
    cfg = config or DetectorConfig()
    ordered = sorted(samples, key=lambda s: (s.t_ms, s.key))
    by_key: dict[str, tuple[list[int], list[int], list[float]]] = {}
    for pos, s in enumerate(ordered):
        positions, ts, forces = by_key.setdefault(s.key, ([], [], []))
        if ts and s.t_ms <= ts[-1]:
            raise NonMonotonicSampleError(
                f"sample for key '{s.key}' at t_ms={s.t_ms} does not advance past t_ms={ts[-1]}"
            )
        positions.append(pos)
        ts.append(s.t_ms)
        forces.append(s.force_n)

    tagged: list[tuple[int, int, KeyEventRecord]] = []
    closures_by_key: dict[str, list[KeyEventRecord]] = {}
    for key, (positions, ts, forces) in by_key.items():
        key_tagged, key_closures = _walk_key(key, positions, ts, forces, cfg)
        tagged.extend(key_tagged)
        closures_by_key[key] = key_closures

    tagged.sort(key=lambda item: (item[0], item[1]))
    events = [ev for _, _, ev in tagged]
    for key in sorted(closures_by_key):
        events.extend(closures_by_key[key])
    return events
