"""Line-delimited JSON gateway: samples in, events and directives out.

Each connection owns one detector and one engine. The client must send a
`config` line before any `sample`; `end` flushes stream-end events and closes
with `done`. Time comes from sample timestamps only, so a recorded session
replays to the identical output. Dwell ticks are synthesized from the previous
sample's timestamp: detector events can be stamped one sample back (the apex
is confirmed by the following sample), so advancing the engine clock any
further before feeding the detector would let a preview fire ahead of an
event that precedes it.
"""
from __future__ import annotations

import json
import socketserver
import threading
from dataclasses import dataclass, field
from importlib import resources

from .detector import (
    Detector,
    DetectorConfig,
    KeyEventRecord,
    NonMonotonicSampleError,
    event_to_obj,
)
from .session import InteractionSession
from .signals import ForceSample
from .wytiwyg import MenuModel, WytiwygConfig, directive_to_obj, load_menu, parse_menu

__all__ = [
    "GatewayDefaults",
    "SessionState",
    "process_line",
    "packaged_menu",
    "open_menu",
    "GatewayServer",
    "serve",
]

_DETECTOR_FIELDS = frozenset(DetectorConfig.__dataclass_fields__)
_WYTIWYG_FIELDS = frozenset(WytiwygConfig.__dataclass_fields__)


def packaged_menu(name: str = "suggest10") -> MenuModel:
    """Load a menu fixture shipped inside the package."""
    root = resources.files("onepress").joinpath("data", "menus")
    path = root.joinpath(f"{name}.yaml")
    if not path.is_file():
        available = sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))
        raise FileNotFoundError(f"no packaged menu named {name!r}; available: {available}")
    return parse_menu(path.read_text(encoding="utf-8"), base_dir=str(root))


@dataclass(frozen=True)
class GatewayDefaults:
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    wytiwyg: WytiwygConfig = field(default_factory=WytiwygConfig)
    menu: MenuModel | None = None

    def resolved_menu(self) -> MenuModel:
        return self.menu if self.menu is not None else packaged_menu()


@dataclass
class SessionState:
    """Mutable per-connection state; `process_line` is its only mutator."""

    defaults: GatewayDefaults
    detector: Detector | None = None
    session: InteractionSession | None = None
    prev_t: int | None = None
    last_t: dict[str, int] = field(default_factory=dict)

    @property
    def configured(self) -> bool:
        return self.detector is not None


def _error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def _configure(state: SessionState, msg: dict) -> dict:
    if state.configured:
        return _error("already-configured", "config was already applied to this session")
    det_over = msg.get("detector", {})
    wyt_over = msg.get("wytiwyg", {})
    for name, overrides, allowed in (
        ("detector", det_over, _DETECTOR_FIELDS),
        ("wytiwyg", wyt_over, _WYTIWYG_FIELDS),
    ):
        if not isinstance(overrides, dict):
            return _error("bad-config", f"'{name}' must be an object of overrides")
        unknown = sorted(set(overrides) - allowed)
        if unknown:
            return _error("bad-config", f"unknown {name} fields: {', '.join(unknown)}")
    menu = state.defaults.menu
    menu_id = msg.get("menu")
    if menu_id is not None:
        if not isinstance(menu_id, str):
            return _error("bad-config", "'menu' must be a fixture id string")
        try:
            menu = packaged_menu(menu_id)
        except FileNotFoundError as exc:
            return _error("bad-config", str(exc))
    try:
        det_cfg = DetectorConfig(
            **{**_as_kwargs(state.defaults.detector, _DETECTOR_FIELDS), **det_over}
        )
        wyt_cfg = WytiwygConfig(
            **{**_as_kwargs(state.defaults.wytiwyg, _WYTIWYG_FIELDS), **wyt_over}
        )
    except (TypeError, ValueError) as exc:
        return _error("bad-config", str(exc))
    if menu is None:
        menu = packaged_menu()
    state.detector = Detector(det_cfg)
    state.session = InteractionSession(menu, wyt_cfg)
    return {"type": "ready"}


def _as_kwargs(cfg, fields: frozenset[str]) -> dict:
    return {name: getattr(cfg, name) for name in fields}


def _handle_sample(state: SessionState, msg: dict) -> list[dict]:
    key = msg.get("key")
    t_ms = msg.get("t_ms")
    force_n = msg.get("force_n")
    if not isinstance(key, str) or isinstance(t_ms, bool) or not isinstance(t_ms, int):
        return [_error("bad-sample", "sample needs string 'key' and integer 't_ms'")]
    if isinstance(force_n, bool) or not isinstance(force_n, (int, float)):
        return [_error("bad-sample", "sample needs numeric 'force_n'")]
    try:
        sample = ForceSample(t_ms=t_ms, key=key, force_n=float(force_n))
    except ValueError as exc:
        return [_error("bad-sample", str(exc))]
    last = state.last_t.get(key)
    if last is not None and t_ms <= last:
        return [
            _error(
                "non-monotonic",
                f"t_ms {t_ms} for key '{key}' does not advance past {last}",
            )
        ]

    out: list[dict] = []
    assert state.detector is not None and state.session is not None
    if state.prev_t is not None:
        for d in state.session.advance_time(state.prev_t):
            out.append({"type": "directive", **directive_to_obj(d)})
    try:
        events = state.detector.feed_sample(sample)
    except NonMonotonicSampleError as exc:
        out.append(_error("non-monotonic", str(exc)))
        return out
    for ev in events:
        out.append({"type": "event", **event_to_obj(ev)})
        for d in state.session.handle_event(ev):
            out.append({"type": "directive", **directive_to_obj(d)})
    state.last_t[key] = t_ms
    state.prev_t = t_ms
    return out


def _handle_end(state: SessionState) -> list[dict]:
    out: list[dict] = []
    assert state.detector is not None and state.session is not None
    for ev in state.detector.end_of_stream():
        out.append({"type": "event", **event_to_obj(ev)})
        for d in state.session.handle_event(ev):
            out.append({"type": "directive", **directive_to_obj(d)})
    out.append({"type": "done"})
    return out


def process_line(state: SessionState, line: str) -> tuple[list[dict], bool]:
    """Apply one inbound line; returns (outbound messages, connection done)."""
    line = line.strip()
    if not line:
        return [], False
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as exc:
        return [_error("bad-json", f"line is not valid JSON: {exc.msg}")], False
    if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
        return [_error("bad-message", "each line must be an object with a string 'type'")], False

    mtype = msg["type"]
    if mtype == "config":
        return [_configure(state, msg)], False
    if mtype == "sample":
        if not state.configured:
            return [_error("unconfigured", "send a config message before samples")], False
        return _handle_sample(state, msg), False
    if mtype == "end":
        if not state.configured:
            return [_error("unconfigured", "send a config message before ending")], False
        return _handle_end(state), True
    return [_error("unknown-type", f"unknown message type {mtype!r}")], False


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        state = SessionState(defaults=self.server.defaults)  # type: ignore[attr-defined]
        while True:
            raw = self.rfile.readline()
            if not raw:
                return
            try:
                text = raw.decode("utf-8")
            except UnicodeDecodeError:
                self._send(_error("bad-json", "line is not valid UTF-8"))
                continue
            out, done = process_line(state, text)
            for msg in out:
                self._send(msg)
            if done:
                return

    def _send(self, msg: dict) -> None:
        self.wfile.write(json.dumps(msg, separators=(",", ":")).encode("utf-8") + b"\n")
        self.wfile.flush()


class GatewayServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], defaults: GatewayDefaults):
        super().__init__(address, _Handler)
        self.defaults = defaults


def serve(
    host: str = "127.0.0.1",
    port: int = 0,
    defaults: GatewayDefaults | None = None,
    ready: threading.Event | None = None,
    announce=print,
) -> None:
    """Run the gateway until interrupted; port 0 picks a free port."""
    defaults = defaults or GatewayDefaults()
    with GatewayServer((host, port), defaults) as server:
        bound_host, bound_port = server.server_address[:2]
        announce(f"listening on {bound_host}:{bound_port}")
        if ready is not None:
            ready.set()
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass


def open_menu(path: str | None) -> MenuModel:
    """Menu from a fixture path, or the packaged default."""
    if path is None:
        return packaged_menu()
    return load_menu(path)
