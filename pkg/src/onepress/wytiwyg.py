"""Touch-to-preview menu engine.

One-press entry opens the menu; medium peaks cycle the highlight (wrapping);
resting on an option past the dwell opens its preview at reduced contrast
with the selected item overlaid; a hard peak while the preview is active
commits; releasing the key bails out at any point before commit.

The engine is a pure step function over immutable state: time only enters
through explicit Tick inputs, so any input sequence replays identically.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

import yaml

__all__ = [
    "ENTER",
    "MEDIUM",
    "HARD",
    "RELEASE",
    "TICK",
    "INPUT_KINDS",
    "INACTIVE",
    "MENU_OPEN",
    "PREVIEW_ACTIVE",
    "COMMITTED",
    "ABORTED",
    "TERMINAL_PHASES",
    "DIRECTIVE_KINDS",
    "EngineInput",
    "MenuOption",
    "MenuModel",
    "MenuFormatError",
    "WytiwygConfig",
    "WytiwygState",
    "Directive",
    "step",
    "reference_interpret",
    "directive_to_obj",
    "directive_to_json",
    "parse_menu",
    "load_menu",
]

# engine inputs
ENTER = "enter"
MEDIUM = "medium"
HARD = "hard"
RELEASE = "release"
TICK = "tick"
INPUT_KINDS = (ENTER, MEDIUM, HARD, RELEASE, TICK)

# phases
INACTIVE = "inactive"
MENU_OPEN = "menu_open"
PREVIEW_ACTIVE = "preview_active"
COMMITTED = "committed"
ABORTED = "aborted"
TERMINAL_PHASES = (COMMITTED, ABORTED)

DIRECTIVE_KINDS = (
    "ShowMenu",
    "Highlight",
    "ShowPreview",
    "HidePreview",
    "CommitOutput",
    "InvalidCommit",
    "DismissAll",
    "Warning",
)


class MenuFormatError(ValueError):
    """A menu fixture file is malformed."""


@dataclass(frozen=True)
class EngineInput:
    kind: str
    t_ms: int


@dataclass(frozen=True)
class MenuOption:
    id: str
    label: str
    preview: str = ""  # pre-rendered preview document (text/HTML blob)


@dataclass(frozen=True)
class MenuModel:
    options: tuple[MenuOption, ...]

    def __post_init__(self) -> None:
        if len(self.options) < 1:
            raise ValueError("menu must have at least one option")
        ids = [o.id for o in self.options]
        if len(set(ids)) != len(ids):
            raise ValueError("menu option ids must be unique")

    @property
    def n(self) -> int:
        return len(self.options)


@dataclass(frozen=True)
class WytiwygConfig:
    dwell_ms: int = 800
    preview_contrast: float = 0.6

    def __post_init__(self) -> None:
        if self.dwell_ms <= 0:
            raise ValueError(f"dwell_ms must be > 0, got {self.dwell_ms}")
        if not 0 < self.preview_contrast <= 1:
            raise ValueError(f"preview_contrast must be in (0, 1], got {self.preview_contrast}")


@dataclass(frozen=True)
class WytiwygState:
    """cursor is 1-based; 0 means the menu is open with nothing selected yet."""

    phase: str = INACTIVE
    cursor: int = 0
    dwell_started_t: int | None = None
    press_count: int = 0
    committed_id: str | None = None


@dataclass(frozen=True)
class Directive:
    """One UI instruction; unset fields are omitted from serialization."""

    kind: str
    t_ms: int
    index: int | None = None
    option_id: str | None = None
    label: str | None = None
    contrast: float | None = None
    preview: str | None = None
    overlay: str | None = None
    reason: str | None = None
    options: tuple[tuple[str, str], ...] | None = None


def _warning(t_ms: int, reason: str) -> Directive:
    return Directive(kind="Warning", t_ms=t_ms, reason=reason)


def step(
    state: WytiwygState,
    inp: EngineInput,
    menu: MenuModel,
    config: WytiwygConfig,
) -> tuple[WytiwygState, list[Directive]]:
    """Advance the engine by one input; returns (new state, directives).

    Ticks are ambient clock carriers: when they trigger nothing they are
    silent no-ops in every phase. Any other input with no mapped transition
    (including anything in a terminal phase) is ignored with a Warning.
    """
    t = inp.t_ms
    if inp.kind not in INPUT_KINDS:
        raise ValueError(f"unknown input kind {inp.kind!r}")

    if state.phase in TERMINAL_PHASES:
        if inp.kind == TICK:
            return state, []
        return state, [_warning(t, f"{inp.kind} ignored in terminal phase {state.phase}")]

    if inp.kind == RELEASE:
        # bail out: any non-terminal phase aborts on release
        return (
            replace(state, phase=ABORTED, dwell_started_t=None),
            [Directive(kind="DismissAll", t_ms=t)],
        )

    if state.phase == INACTIVE:
        if inp.kind == ENTER:
            new = WytiwygState(phase=MENU_OPEN, cursor=0, dwell_started_t=None, press_count=0)
            opts = tuple((o.id, o.label) for o in menu.options)
            return new, [Directive(kind="ShowMenu", t_ms=t, options=opts)]
        if inp.kind == TICK:
            return state, []
        return state, [_warning(t, f"{inp.kind} ignored while inactive")]

    if state.phase == MENU_OPEN:
        if inp.kind == MEDIUM:
            cursor = 1 if state.cursor == 0 else state.cursor % menu.n + 1
            opt = menu.options[cursor - 1]
            new = replace(
                state, cursor=cursor, dwell_started_t=t, press_count=state.press_count + 1
            )
            return new, [Directive(kind="Highlight", t_ms=t, index=cursor, option_id=opt.id, label=opt.label)]
        if inp.kind == HARD:
            return state, [
                Directive(kind="InvalidCommit", t_ms=t, reason="commit requires an active preview")
            ]
        if inp.kind == TICK:
            if (
                state.cursor >= 1
                and state.dwell_started_t is not None
                and t - state.dwell_started_t >= config.dwell_ms
            ):
                # stamped at the elapse instant, not the observing tick
                fire_t = state.dwell_started_t + config.dwell_ms
                opt = menu.options[state.cursor - 1]
                return replace(state, phase=PREVIEW_ACTIVE), [
                    Directive(
                        kind="ShowPreview",
                        t_ms=fire_t,
                        index=state.cursor,
                        option_id=opt.id,
                        label=opt.label,
                        contrast=config.preview_contrast,
                        preview=opt.preview,
                        overlay=opt.label,
                    )
                ]
            return state, []
        return state, [_warning(t, f"{inp.kind} ignored while menu is open")]

    if state.phase == PREVIEW_ACTIVE:
        if inp.kind == MEDIUM:
            cursor = state.cursor % menu.n + 1
            opt = menu.options[cursor - 1]
            new = replace(
                state,
                phase=MENU_OPEN,
                cursor=cursor,
                dwell_started_t=t,
                press_count=state.press_count + 1,
            )
            return new, [
                Directive(kind="HidePreview", t_ms=t),
                Directive(kind="Highlight", t_ms=t, index=cursor, option_id=opt.id, label=opt.label),
            ]
        if inp.kind == HARD:
            opt = menu.options[state.cursor - 1]
            return replace(state, phase=COMMITTED, committed_id=opt.id), [
                Directive(
                    kind="CommitOutput",
                    t_ms=t,
                    index=state.cursor,
                    option_id=opt.id,
                    label=opt.label,
                    preview=opt.preview,
                )
            ]
        if inp.kind == TICK:
            return state, []
        return state, [_warning(t, f"{inp.kind} ignored while preview is active")]

    raise AssertionError(f"unknown phase {state.phase!r}")


def reference_interpret(
    inputs: list[EngineInput], menu: MenuModel, config: WytiwygConfig
) -> WytiwygState:
    """Naive whole-sequence interpreter used as a test oracle for step().

    Independently written: walks the sequence with plain locals and returns
    only the final state. Must agree with folding step() over the inputs.
    """
    phase = INACTIVE
    cursor = 0
    dwell_started: int | None = None
    presses = 0
    committed: str | None = None
    n = len(menu.options)
    for inp in inputs:
        if phase in (COMMITTED, ABORTED):
            continue
        if inp.kind == RELEASE:
            phase = ABORTED
            dwell_started = None
        elif phase == INACTIVE:
            if inp.kind == ENTER:
                phase, cursor, dwell_started, presses = MENU_OPEN, 0, None, 0
        elif phase == MENU_OPEN:
            if inp.kind == MEDIUM:
                cursor = 1 if cursor == 0 else cursor % n + 1
                presses += 1
                dwell_started = inp.t_ms
            elif inp.kind == TICK:
                if cursor >= 1 and dwell_started is not None and inp.t_ms - dwell_started >= config.dwell_ms:
                    phase = PREVIEW_ACTIVE
        elif phase == PREVIEW_ACTIVE:
            if inp.kind == MEDIUM:
                cursor = cursor % n + 1
                presses += 1
                dwell_started = inp.t_ms
                phase = MENU_OPEN
            elif inp.kind == HARD:
                phase = COMMITTED
                committed = menu.options[cursor - 1].id
    return WytiwygState(
        phase=phase,
        cursor=cursor,
        dwell_started_t=dwell_started,
        press_count=presses,
        committed_id=committed,
    )


def directive_to_obj(d: Directive) -> dict:
    # fixed field order for byte-exact serialized streams
    obj: dict = {"kind": d.kind, "t_ms": d.t_ms}
    if d.index is not None:
        obj["index"] = d.index
    if d.option_id is not None:
        obj["option_id"] = d.option_id
    if d.label is not None:
        obj["label"] = d.label
    if d.contrast is not None:
        obj["contrast"] = d.contrast
    if d.preview is not None:
        obj["preview"] = d.preview
    if d.overlay is not None:
        obj["overlay"] = d.overlay
    if d.reason is not None:
        obj["reason"] = d.reason
    if d.options is not None:
        obj["options"] = [{"id": oid, "label": label} for oid, label in d.options]
    return obj


def directive_to_json(d: Directive) -> str:
    return json.dumps(directive_to_obj(d), separators=(",", ":"))


def parse_menu(text: str, base_dir: str | None = None) -> MenuModel:
    """Parse a YAML menu fixture.

    Expected shape::

        options:
          - id: opt1
            label: first choice
            preview: previews/opt1.html   # path relative to the fixture file

    Preview documents are loaded eagerly so the model is self-contained.
    A `preview_text` field may inline the document instead of referencing one.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise MenuFormatError(f"menu fixture is not valid YAML: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("options"), list):
        raise MenuFormatError("menu fixture must be a mapping with an 'options' list")
    options = []
    for i, raw in enumerate(data["options"]):
        where = f"option {i}"
        if not isinstance(raw, dict):
            raise MenuFormatError(f"{where}: must be a mapping")
        oid = raw.get("id")
        label = raw.get("label")
        if not isinstance(oid, str) or not oid or not isinstance(label, str) or not label:
            raise MenuFormatError(f"{where}: 'id' and 'label' must be non-empty strings")
        if "preview_text" in raw:
            preview = str(raw["preview_text"])
        elif "preview" in raw:
            rel = str(raw["preview"])
            path = os.path.join(base_dir, rel) if base_dir else rel
            try:
                with open(path, "r", encoding="utf-8") as fp:
                    preview = fp.read()
            except OSError as exc:
                raise MenuFormatError(f"{where}: cannot read preview document {rel!r}: {exc}") from None
        else:
            preview = ""
        options.append(MenuOption(id=oid, label=label, preview=preview))
    try:
        return MenuModel(options=tuple(options))
    except ValueError as exc:
        raise MenuFormatError(str(exc)) from None


def load_menu(path: str) -> MenuModel:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_menu(fp.read(), base_dir=os.path.dirname(os.path.abspath(path)))
