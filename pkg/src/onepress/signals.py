"""Force-trace primitives: samples, a simulated sensor, press scripts, trace files.

The sensor stand-in clamps readings to a usable band (below the floor the
output reads 0, above saturation it clamps) and adds seeded Gaussian noise,
so everything downstream can be exercised without pressure-sensing hardware.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable

import yaml

__all__ = [
    "ForceSample",
    "SensorModel",
    "Segment",
    "PressScript",
    "ScriptError",
    "TraceFormatError",
    "validate_script",
    "envelope_at",
    "synthesize_trace",
    "write_trace",
    "read_trace",
    "parse_script",
    "load_script",
]

TRACE_HEADER = "t_ms,key,force_n"

SEGMENT_KINDS = ("idle", "quick_strike", "soft_hold", "peak")


class ScriptError(ValueError):
    """A press script violates its structural invariants."""


class TraceFormatError(ValueError):
    """A trace file is malformed or breaks sample invariants."""


@dataclass(frozen=True)
class ForceSample:
    """One conditioned sensor reading for one key."""

    t_ms: int
    key: str
    force_n: float

    def __post_init__(self) -> None:
        if self.t_ms < 0:
            raise ValueError(f"t_ms must be non-negative, got {self.t_ms}")
        if not self.key:
            raise ValueError("key must be non-empty")
        if not math.isfinite(self.force_n) or self.force_n < 0:
            raise ValueError(f"force_n must be finite and >= 0, got {self.force_n}")


@dataclass(frozen=True)
class SensorModel:
    """Identity-with-clamp sensor model.

    Readings below ``floor_n`` report 0, readings above ``saturation_n`` clamp
    to it; in between the scripted force passes through unchanged apart from
    additive Gaussian noise.
    """

    floor_n: float = 0.6
    saturation_n: float = 3.0
    noise_sigma_n: float = 0.0
    sample_rate_hz: float = 100.0

    def __post_init__(self) -> None:
        if not 0 < self.floor_n < self.saturation_n:
            raise ValueError(
                f"require 0 < floor_n < saturation_n, got {self.floor_n}, {self.saturation_n}"
            )
        if self.noise_sigma_n < 0:
            raise ValueError(f"noise_sigma_n must be >= 0, got {self.noise_sigma_n}")
        # integer-ms timestamps cannot resolve more than 1000 samples/s
        if not 0 < self.sample_rate_hz <= 1000:
            raise ValueError(f"sample_rate_hz must be in (0, 1000], got {self.sample_rate_hz}")

    def condition(self, force_n: float) -> float:
        if force_n < self.floor_n:
            return 0.0
        return min(force_n, self.saturation_n)


@dataclass(frozen=True)
class Segment:
    """One scripted stretch of the force envelope.

    Kinds: ``idle`` (ramp to zero and rest), ``quick_strike`` (rise to target,
    plateau, fall back to zero within the segment), ``soft_hold`` (rise to a
    sub-band target and hold it), ``peak`` (rise to an apex and return to the
    held baseline, soft_hold required earlier in the same depress cycle).
    """

    kind: str
    duration_ms: int
    target_force_n: float = 0.0
    rise_ms: int = 80
    fall_ms: int = 80

    def __post_init__(self) -> None:
        if self.kind not in SEGMENT_KINDS:
            raise ValueError(f"segment kind must be one of {SEGMENT_KINDS}, got {self.kind!r}")
        if self.duration_ms < 0 or self.rise_ms < 0 or self.fall_ms < 0:
            raise ValueError("segment durations must be >= 0")
        if not math.isfinite(self.target_force_n) or self.target_force_n < 0:
            raise ValueError(f"target_force_n must be finite and >= 0, got {self.target_force_n}")


@dataclass(frozen=True)
class PressScript:
    key: str
    segments: tuple[Segment, ...]

    @property
    def total_ms(self) -> int:
        return sum(seg.duration_ms for seg in self.segments)


def validate_script(script: PressScript) -> None:
    """Reject structurally invalid scripts, naming the offending segment."""
    if not script.key:
        raise ScriptError("script key must be non-empty")
    held_soft = False  # a soft_hold occurred in the current depress cycle
    for i, seg in enumerate(script.segments):
        where = f"segment {i} ({seg.kind})"
        if seg.kind not in SEGMENT_KINDS:
            raise ScriptError(f"{where}: unknown kind, expected one of {SEGMENT_KINDS}")
        if seg.duration_ms <= 0:
            raise ScriptError(f"{where}: duration_ms must be > 0, got {seg.duration_ms}")
        if not math.isfinite(seg.target_force_n) or seg.target_force_n < 0:
            raise ScriptError(f"{where}: target_force_n must be finite and >= 0")
        if seg.rise_ms < 0 or seg.fall_ms < 0:
            raise ScriptError(f"{where}: rise_ms and fall_ms must be >= 0")
        if seg.kind in ("quick_strike", "peak") and seg.rise_ms + seg.fall_ms > seg.duration_ms:
            raise ScriptError(f"{where}: rise_ms + fall_ms must not exceed duration_ms")
        if seg.kind == "idle" and seg.fall_ms > seg.duration_ms:
            raise ScriptError(f"{where}: fall_ms must not exceed duration_ms")
        if seg.kind == "soft_hold" and seg.rise_ms > seg.duration_ms:
            raise ScriptError(f"{where}: rise_ms must not exceed duration_ms")
        if seg.kind == "peak" and not held_soft:
            raise ScriptError(f"{where}: peak requires an earlier soft_hold in the same depress cycle")
        if seg.kind in ("idle", "quick_strike"):
            held_soft = False
        elif seg.kind == "soft_hold":
            held_soft = True


def _ramp(a: float, b: float, u: float) -> float:
    # raised-cosine ease from a to b, u in [0, 1]
    return a + (b - a) * 0.5 * (1.0 - math.cos(math.pi * u))


def _profile(script: PressScript) -> list[tuple[int, int, Segment, float]]:
    """Per segment: (start_ms, end_ms, segment, entry force level)."""
    out = []
    level = 0.0
    t0 = 0
    for seg in script.segments:
        out.append((t0, t0 + seg.duration_ms, seg, level))
        if seg.kind in ("idle", "quick_strike"):
            level = 0.0
        elif seg.kind == "soft_hold":
            level = seg.target_force_n
        t0 += seg.duration_ms
    return out


def _segment_force(seg: Segment, level_in: float, local_ms: float) -> float:
    if seg.kind == "idle":
        if seg.fall_ms > 0 and local_ms < seg.fall_ms:
            return _ramp(level_in, 0.0, local_ms / seg.fall_ms)
        return 0.0
    if seg.kind == "soft_hold":
        if seg.rise_ms > 0 and local_ms < seg.rise_ms:
            return _ramp(level_in, seg.target_force_n, local_ms / seg.rise_ms)
        return seg.target_force_n
    if seg.kind == "peak":
        if seg.rise_ms > 0 and local_ms < seg.rise_ms:
            return _ramp(level_in, seg.target_force_n, local_ms / seg.rise_ms)
        if seg.fall_ms > 0 and local_ms < seg.rise_ms + seg.fall_ms:
            return _ramp(seg.target_force_n, level_in, (local_ms - seg.rise_ms) / seg.fall_ms)
        return level_in if local_ms >= seg.rise_ms + seg.fall_ms else seg.target_force_n
    # quick_strike
    if seg.rise_ms > 0 and local_ms < seg.rise_ms:
        return _ramp(level_in, seg.target_force_n, local_ms / seg.rise_ms)
    fall_start = seg.duration_ms - seg.fall_ms
    if local_ms < fall_start:
        return seg.target_force_n
    if seg.fall_ms > 0:
        return _ramp(seg.target_force_n, 0.0, (local_ms - fall_start) / seg.fall_ms)
    return 0.0


def envelope_at(script: PressScript, t_ms: float) -> float:
    """Noise-free scripted force at t_ms (0 outside the script's span)."""
    for t0, t1, seg, level_in in _profile(script):
        if t0 <= t_ms < t1:
            return _segment_force(seg, level_in, t_ms - t0)
    return 0.0


def synthesize_trace(
    script: PressScript, sensor: SensorModel | None = None, seed: int = 0
) -> list[ForceSample]:
    """Sample the script's envelope through the sensor model.

    Ramps are raised-cosine (smooth ends, monotone within a ramp). Noise is
    drawn from ``random.Random(seed)``, so identical (script, sensor, seed)
    inputs always produce the identical trace. The sensor clamp runs after
    noise: anything below the floor reads 0, anything above saturation clamps.
    """
    sensor = sensor or SensorModel()
    validate_script(script)
    profile = _profile(script)
    total_ms = script.total_ms
    if total_ms == 0:
        return []
    rng = random.Random(seed) if sensor.noise_sigma_n > 0 else None
    period = 1000.0 / sensor.sample_rate_hz
    samples: list[ForceSample] = []
    seg_i = 0
    i = 0
    while True:
        t = round(i * period)
        if t >= total_ms:
            break
        while t >= profile[seg_i][1]:
            seg_i += 1
        t0, _, seg, level_in = profile[seg_i]
        f = _segment_force(seg, level_in, t - t0)
        if rng is not None:
            f += rng.gauss(0.0, sensor.noise_sigma_n)
        samples.append(ForceSample(t_ms=t, key=script.key, force_n=sensor.condition(f)))
        i += 1
    return samples


def write_trace(samples: Iterable[ForceSample]) -> str:
    """Serialize samples as CSV text, rows sorted by (key, t_ms).

    Force values use shortest round-trip float notation, so
    ``read_trace(write_trace(s)) == s`` exactly for canonically ordered traces.
    """
    rows = sorted(samples, key=lambda s: (s.key, s.t_ms))
    lines = [TRACE_HEADER]
    last: dict[str, int] = {}
    for s in rows:
        if "," in s.key or "\n" in s.key or "\r" in s.key:
            raise TraceFormatError(f"key {s.key!r} contains CSV delimiter characters")
        if s.key in last and s.t_ms <= last[s.key]:
            raise TraceFormatError(
                f"non-monotonic t_ms for key '{s.key}': {s.t_ms} does not advance past {last[s.key]}"
            )
        last[s.key] = s.t_ms
        lines.append(f"{s.t_ms},{s.key},{s.force_n!r}")
    return "\n".join(lines) + "\n"


def read_trace(text: str) -> list[ForceSample]:
    """Parse CSV trace text; errors carry 1-based line numbers.

    Empty text is an empty trace. Anything else must start with the header.
    """
    if not text.strip():
        return []
    lines = text.splitlines()
    if lines[0].strip() != TRACE_HEADER:
        raise TraceFormatError(f"line 1: expected header '{TRACE_HEADER}'")
    samples: list[ForceSample] = []
    last: dict[str, tuple[int, int]] = {}  # key -> (line_no, t_ms)
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise TraceFormatError(f"line {line_no}: blank line")
        parts = line.split(",")
        if len(parts) != 3:
            raise TraceFormatError(f"line {line_no}: expected 3 fields, got {len(parts)}")
        t_raw, key, f_raw = parts
        try:
            t_ms = int(t_raw)
        except ValueError:
            raise TraceFormatError(f"line {line_no}: t_ms is not an integer: {t_raw!r}") from None
        try:
            force_n = float(f_raw)
        except ValueError:
            raise TraceFormatError(f"line {line_no}: force_n is not a number: {f_raw!r}") from None
        try:
            sample = ForceSample(t_ms=t_ms, key=key, force_n=force_n)
        except ValueError as exc:
            raise TraceFormatError(f"line {line_no}: {exc}") from None
        if key in last:
            prev_line, prev_t = last[key]
            if t_ms <= prev_t:
                raise TraceFormatError(
                    f"non-monotonic t_ms for key '{key}': line {line_no} (t_ms={t_ms}) "
                    f"does not advance past line {prev_line} (t_ms={prev_t})"
                )
        last[key] = (line_no, t_ms)
        samples.append(sample)
    return samples


_SEGMENT_FIELDS = {"kind", "duration_ms", "target_force_n", "rise_ms", "fall_ms"}


def parse_script(text: str) -> PressScript:
    """Parse a YAML press script.

    Expected shape::

        key: space
        segments:
          - kind: soft_hold
            duration_ms: 700
            target_force_n: 0.8
            rise_ms: 80
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScriptError(f"script is not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ScriptError("script must be a mapping with 'key' and 'segments'")
    unknown = set(data) - {"key", "segments"}
    if unknown:
        raise ScriptError(f"unknown script fields: {sorted(unknown)}")
    key = data.get("key")
    if not isinstance(key, str) or not key:
        raise ScriptError("script 'key' must be a non-empty string")
    raw_segments = data.get("segments")
    if not isinstance(raw_segments, list):
        raise ScriptError("script 'segments' must be a list")
    segments = []
    for i, raw in enumerate(raw_segments):
        where = f"segment {i}"
        if not isinstance(raw, dict):
            raise ScriptError(f"{where}: must be a mapping")
        unknown = set(raw) - _SEGMENT_FIELDS
        if unknown:
            raise ScriptError(f"{where}: unknown fields {sorted(unknown)}")
        if "kind" not in raw or "duration_ms" not in raw:
            raise ScriptError(f"{where}: 'kind' and 'duration_ms' are required")
        try:
            segments.append(
                Segment(
                    kind=str(raw["kind"]),
                    duration_ms=int(raw["duration_ms"]),
                    target_force_n=float(raw.get("target_force_n", 0.0)),
                    rise_ms=int(raw.get("rise_ms", 80)),
                    fall_ms=int(raw.get("fall_ms", 80)),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ScriptError(f"{where}: {exc}") from None
    script = PressScript(key=key, segments=tuple(segments))
    validate_script(script)
    return script


def load_script(path: str) -> PressScript:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_script(fp.read())
