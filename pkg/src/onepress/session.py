"""Session layer: drives one menu engine over a detector event stream.

Synthesizes engine Ticks deterministically from input timestamps (never a
wall clock), owns the depress/release cycle lifecycle, and records one
transcript per cycle for the trial harness. Online (per-sample ticks) and
offline (per-event ticks) feeding produce identical directive streams because
ShowPreview is stamped at the dwell-elapse instant and the engine resets to
Inactive only between cycles.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .detector import (
    CLASSICAL_DEPRESS,
    CLASSICAL_RELEASE,
    HARD_REPEAT,
    MEDIUM_REPEAT,
    ONE_PRESS_ENTER,
    ONE_PRESS_RELEASE,
    KeyEventRecord,
)
from .wytiwyg import (
    ENTER,
    HARD,
    MEDIUM,
    RELEASE,
    TERMINAL_PHASES,
    TICK,
    Directive,
    EngineInput,
    MenuModel,
    WytiwygConfig,
    WytiwygState,
    step,
)

__all__ = ["CycleRecord", "InteractionSession", "run_events"]

_ENGINE_INPUT_BY_KIND = {
    ONE_PRESS_ENTER: ENTER,
    MEDIUM_REPEAT: MEDIUM,
    HARD_REPEAT: HARD,
    ONE_PRESS_RELEASE: RELEASE,
}


@dataclass
class CycleRecord:
    """Transcript of one depress/release cycle on one key.

    Classical cycles have an empty directive list (a zero-length engine
    transcript); one-press cycles carry every directive the engine produced
    while the cycle was open, including dwell-tick previews.
    """

    key: str
    one_press: bool
    events: list[KeyEventRecord] = field(default_factory=list)
    directives: list[Directive] = field(default_factory=list)
    final_state: WytiwygState = field(default_factory=WytiwygState)

    @property
    def terminal(self) -> bool:
        return self.final_state.phase in TERMINAL_PHASES


class InteractionSession:
    """One engine + cycle bookkeeping for a stream of detector events.

    The engine is driven by one-press events of the key that opened it; while
    it is busy, one-press events from other keys are answered with a Warning
    directive without stepping the engine (cross-key attachment is out of
    scope). Classical events pass through untouched and are logged per key.
    """

    def __init__(self, menu: MenuModel, config: WytiwygConfig | None = None) -> None:
        self.menu = menu
        self.config = config or WytiwygConfig()
        self.state = WytiwygState()
        self.clock: int | None = None
        self.closed: list[CycleRecord] = []
        self._open: dict[str, CycleRecord] = {}
        self._engine_key: str | None = None  # key currently driving the engine

    # -------------------------------------------------- time

    def advance_time(self, t_ms: int) -> list[Directive]:
        """Feed a Tick; no-op unless the clock moves forward."""
        if self.clock is not None and t_ms <= self.clock:
            return []
        self.clock = t_ms
        self.state, dirs = step(self.state, EngineInput(TICK, t_ms), self.menu, self.config)
        if dirs and self._engine_key is not None:
            rec = self._open.get(self._engine_key)
            if rec is not None:
                rec.directives.extend(dirs)
        return dirs

    # -------------------------------------------------- events

    def handle_event(self, ev: KeyEventRecord) -> list[Directive]:
        if ev.kind == CLASSICAL_DEPRESS:
            self._record(ev, one_press=False)
            return []
        if ev.kind == CLASSICAL_RELEASE:
            self._record(ev, one_press=False)
            self._close(ev.key)
            return []

        out = list(self.advance_time(ev.t_ms))
        rec = self._record(ev, one_press=True)

        if self._engine_key is not None and ev.key != self._engine_key:
            warn = Directive(
                kind="Warning",
                t_ms=ev.t_ms,
                reason=f"one-press event on '{ev.key}' ignored while '{self._engine_key}' holds the menu",
            )
            rec.directives.append(warn)
            out.append(warn)
            if ev.kind == ONE_PRESS_RELEASE:
                self._close(ev.key)
            return out

        if ev.kind == ONE_PRESS_ENTER:
            self._engine_key = ev.key
        if ev.kind == ONE_PRESS_RELEASE and self.state.phase in TERMINAL_PHASES:
            # cycle already resolved (committed or aborted); release just closes it
            rec.final_state = self.state
            self._finish_engine_cycle(ev.key)
            return out

        self.state, dirs = step(
            self.state, EngineInput(_ENGINE_INPUT_BY_KIND[ev.kind], ev.t_ms), self.menu, self.config
        )
        rec.directives.extend(dirs)
        out.extend(dirs)
        if ev.kind == ONE_PRESS_RELEASE:
            rec.final_state = self.state
            self._finish_engine_cycle(ev.key)
        return out

    # -------------------------------------------------- cycles

    def _record(self, ev: KeyEventRecord, one_press: bool) -> CycleRecord:
        rec = self._open.get(ev.key)
        if rec is None:
            rec = CycleRecord(key=ev.key, one_press=one_press)
            self._open[ev.key] = rec
        if one_press:
            rec.one_press = True
        rec.events.append(ev)
        return rec

    def _finish_engine_cycle(self, key: str) -> None:
        self._close(key)
        self.state = WytiwygState()
        self._engine_key = None

    def _close(self, key: str) -> None:
        rec = self._open.pop(key, None)
        if rec is not None:
            self.closed.append(rec)

    def finish(self) -> list[CycleRecord]:
        """Closed cycles plus any still-open ones (left incomplete)."""
        out = list(self.closed)
        for key in sorted(self._open):
            rec = self._open[key]
            if key == self._engine_key:
                rec.final_state = self.state
            out.append(rec)
        return out


def run_events(
    events: list[KeyEventRecord], menu: MenuModel, config: WytiwygConfig | None = None
) -> tuple[list[Directive], InteractionSession]:
    """Replay a complete event stream through a fresh session."""
    session = InteractionSession(menu, config)
    directives: list[Directive] = []
    for ev in events:
        directives.extend(session.handle_event(ev))
    return directives, session
