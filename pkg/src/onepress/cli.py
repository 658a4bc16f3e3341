"""Command-line front end.

Exit codes: 0 success, 2 usage problems (bad flags, unreadable files),
1 data problems (files that parse but violate an invariant). Failures print
one JSON object per line to stderr so scripts can consume them.

A YAML config file ({detector: {...}, wytiwyg: {...}}) can be passed with
--config; the ONEPRESS_CONFIG environment variable names a default path used
when the flag is absent.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import yaml

from .bindings import BindingFormatError
from .detector import (
    DetectorConfig,
    EventFormatError,
    NonMonotonicSampleError,
    detect_events,
    events_to_jsonl,
    parse_events_jsonl,
)
from .gateway import GatewayDefaults, open_menu
from .gateway import serve as gateway_serve
from .session import run_events
from .signals import (
    ScriptError,
    SensorModel,
    TraceFormatError,
    load_script,
    read_trace,
    synthesize_trace,
    write_trace,
)
from .trial import (
    PRESETS,
    ClassificationError,
    TrialInputError,
    default_menu,
    format_summary_table,
    run_trial,
    summarize,
    write_trial_log,
)
from .wytiwyg import MenuFormatError, WytiwygConfig

__all__ = ["main", "build_parser", "load_config_file"]

CONFIG_ENV_VAR = "ONEPRESS_CONFIG"

_DATA_ERRORS = (
    ScriptError,
    TraceFormatError,
    EventFormatError,
    MenuFormatError,
    BindingFormatError,
    ClassificationError,
    TrialInputError,
    NonMonotonicSampleError,
    ValueError,
)
_USAGE_ERRORS = (FileNotFoundError, IsADirectoryError, NotADirectoryError, PermissionError)


class ConfigFileError(ValueError):
    """A config file parsed but does not describe valid settings."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(2)


def load_config_file(path: str) -> tuple[DetectorConfig, WytiwygConfig]:
    with open(path, encoding="utf-8") as fp:
        data = yaml.safe_load(fp)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigFileError(f"{path}: config must be a mapping")
    unknown = sorted(set(data) - {"detector", "wytiwyg"})
    if unknown:
        raise ConfigFileError(f"{path}: unknown sections: {', '.join(unknown)}")
    out = []
    for section, cls in (("detector", DetectorConfig), ("wytiwyg", WytiwygConfig)):
        overrides = data.get(section, {})
        if not isinstance(overrides, dict):
            raise ConfigFileError(f"{path}: '{section}' must be a mapping")
        bad = sorted(set(overrides) - set(cls.__dataclass_fields__))
        if bad:
            raise ConfigFileError(f"{path}: unknown {section} fields: {', '.join(bad)}")
        try:
            out.append(cls(**overrides))
        except (TypeError, ValueError) as exc:
            raise ConfigFileError(f"{path}: bad {section} config: {exc}") from exc
    return out[0], out[1]


def _resolve_config(args) -> tuple[DetectorConfig, WytiwygConfig]:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if path:
        return load_config_file(path)
    return DetectorConfig(), WytiwygConfig()


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fp:
        return fp.read()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fp:
            fp.write(text)


# -------------------------------------------------- commands


def _cmd_gen(args) -> int:
    script = load_script(args.script)
    sensor = SensorModel(
        floor_n=args.floor_n,
        saturation_n=args.saturation_n,
        noise_sigma_n=args.noise_sigma_n,
        sample_rate_hz=args.sample_rate_hz,
    )
    samples = synthesize_trace(script, sensor=sensor, seed=args.seed)
    _emit(write_trace(samples), args.out)
    return 0


def _cmd_detect(args) -> int:
    config, _ = _resolve_config(args)
    samples = read_trace(_read(args.trace))
    events = detect_events(samples, config)
    _emit(events_to_jsonl(events), args.out)
    if args.plot:
        from .report import save_trace_figure

        save_trace_figure(samples, events, args.plot, config)
    return 0


def _cmd_replay(args) -> int:
    _, wyt = _resolve_config(args)
    events = parse_events_jsonl(_read(args.events))
    menu = open_menu(args.menu)
    directives, session = run_events(events, menu, wyt)
    from .wytiwyg import directive_to_json

    text = "".join(directive_to_json(d) + "\n" for d in directives)
    _emit(text, args.out)
    cycles = [c for c in session.finish() if c.one_press]
    st = cycles[-1].final_state if cycles else session.state
    print(
        json.dumps(
            {
                "events": len(events),
                "directives": len(directives),
                "cycles": len(cycles),
                "phase": st.phase,
                "cursor": st.cursor,
                "press_count": st.press_count,
                "committed_id": st.committed_id,
            },
            separators=(",", ":"),
        )
    )
    return 0


def _load_attempt_dir(root: str) -> list[tuple[str, list]]:
    """One log per subdirectory, or one log from a flat directory of files."""
    if not os.path.isdir(root):
        raise NotADirectoryError(f"{root} is not a directory")
    subdirs = sorted(
        d for d in os.listdir(root) if os.path.isdir(os.path.join(root, d))
    )
    logs = []
    if subdirs:
        groups = [(d, os.path.join(root, d)) for d in subdirs]
    else:
        groups = [(os.path.basename(os.path.normpath(root)), root)]
    for name, path in groups:
        files = sorted(f for f in os.listdir(path) if f.endswith(".jsonl"))
        if not files:
            raise TrialInputError(f"{path}: no .jsonl attempt files")
        sequences = [parse_events_jsonl(_read(os.path.join(path, f))) for f in files]
        logs.append((name, sequences))
    return logs


def _cmd_trial(args) -> int:
    _, wyt = _resolve_config(args)
    task = PRESETS[args.preset]
    menu = open_menu(args.menu) if args.menu else default_menu(task.menu_size)
    logs = []
    for name, sequences in _load_attempt_dir(args.inputs):
        logs.append(run_trial(task, sequences, menu, wyt, name=name))
    summaries = [summarize(log) for log in logs]
    table = format_summary_table(summaries)
    attempts = sum(s["attempts"] for s in summaries)
    score = sum(s["score"] for s in summaries)
    table += f"failures: {attempts - score} of {attempts} attempts\n"
    if args.log:
        _emit(write_trial_log(logs), args.log)
    if args.summary:
        _emit(table, args.summary)
    sys.stdout.write(table)
    if args.figures_dir:
        from .report import save_trial_figures

        save_trial_figures(summaries, args.figures_dir)
    return 0


def _cmd_serve(args) -> int:
    det, wyt = _resolve_config(args)
    menu = open_menu(args.menu)
    gateway_serve(
        host=args.host,
        port=args.port,
        defaults=GatewayDefaults(detector=det, wytiwyg=wyt, menu=menu),
    )
    return 0


# -------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="onepress", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="synthesize a force trace from a press script")
    p.add_argument("--script", required=True, help="press script YAML")
    p.add_argument("--out", help="trace CSV path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-rate-hz", type=float, default=100.0)
    p.add_argument("--noise-sigma-n", type=float, default=0.0)
    p.add_argument("--floor-n", type=float, default=0.6)
    p.add_argument("--saturation-n", type=float, default=3.0)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("detect", help="run the detector over a trace file")
    p.add_argument("--trace", required=True, help="trace CSV path")
    p.add_argument("--out", help="events JSONL path (default stdout)")
    p.add_argument("--config", help="config YAML path")
    p.add_argument("--plot", help="write a force/event figure to this path")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("replay", help="replay events through the menu engine")
    p.add_argument("--events", required=True, help="events JSONL path")
    p.add_argument("--menu", help="menu fixture YAML (default: packaged menu)")
    p.add_argument("--out", help="directives JSONL path (default stdout)")
    p.add_argument("--config", help="config YAML path")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("trial", help="classify recorded attempts against a task preset")
    p.add_argument("--preset", choices=sorted(PRESETS), default="target-task")
    p.add_argument("--inputs", required=True, help="directory of attempt JSONL files")
    p.add_argument("--log", help="write per-attempt JSONL log here")
    p.add_argument("--summary", help="write the summary table here")
    p.add_argument("--figures-dir", help="write scores/failure figures here")
    p.add_argument("--menu", help="menu fixture YAML (default: plain task menu)")
    p.add_argument("--config", help="config YAML path")
    p.set_defaults(func=_cmd_trial)

    p = sub.add_parser("serve", help="run the line-delimited JSON session gateway")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7787)
    p.add_argument("--config", help="config YAML path")
    p.add_argument("--menu", help="menu fixture YAML (default: packaged menu)")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
