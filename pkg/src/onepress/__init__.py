"""Pressure-keyboard input layer: force-peak detection and a press-and-hold
menu engine, with trace synthesis, trial scoring, and a streaming gateway."""
from .bindings import (
    BindingFormatError,
    BindingTable,
    ModifiedKeyEvent,
    load_bindings,
    parse_bindings,
    resolve,
    sample_table,
    to_modified,
)
from .detector import (
    CLASSICAL_DEPRESS,
    CLASSICAL_RELEASE,
    HARD_REPEAT,
    MEDIUM_REPEAT,
    ONE_PRESS_ENTER,
    ONE_PRESS_RELEASE,
    Detector,
    DetectorConfig,
    EventFormatError,
    KeyEventRecord,
    NonMonotonicSampleError,
    classify_apex,
    detect_events,
    event_to_json,
    events_to_jsonl,
    parse_events_jsonl,
)
from .reference import reference_detect
from .session import CycleRecord, InteractionSession, run_events
from .signals import (
    ForceSample,
    PressScript,
    ScriptError,
    Segment,
    SensorModel,
    TraceFormatError,
    envelope_at,
    load_script,
    parse_script,
    read_trace,
    synthesize_trace,
    write_trace,
)
from .trial import (
    CATEGORIES,
    PRESETS,
    AttemptOutcome,
    ClassificationError,
    TaskSpec,
    TrialInputError,
    TrialLog,
    classify_attempt,
    run_trial,
    summarize,
)
from .wytiwyg import (
    Directive,
    EngineInput,
    MenuFormatError,
    MenuModel,
    MenuOption,
    WytiwygConfig,
    WytiwygState,
    load_menu,
    parse_menu,
    reference_interpret,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ForceSample",
    "SensorModel",
    "Segment",
    "PressScript",
    "ScriptError",
    "TraceFormatError",
    "envelope_at",
    "synthesize_trace",
    "write_trace",
    "read_trace",
    "parse_script",
    "load_script",
    "Detector",
    "DetectorConfig",
    "KeyEventRecord",
    "NonMonotonicSampleError",
    "EventFormatError",
    "classify_apex",
    "detect_events",
    "event_to_json",
    "events_to_jsonl",
    "parse_events_jsonl",
    "CLASSICAL_DEPRESS",
    "CLASSICAL_RELEASE",
    "ONE_PRESS_ENTER",
    "MEDIUM_REPEAT",
    "HARD_REPEAT",
    "ONE_PRESS_RELEASE",
    "reference_detect",
    "BindingTable",
    "BindingFormatError",
    "ModifiedKeyEvent",
    "to_modified",
    "resolve",
    "sample_table",
    "parse_bindings",
    "load_bindings",
    "EngineInput",
    "MenuOption",
    "MenuModel",
    "WytiwygConfig",
    "WytiwygState",
    "Directive",
    "MenuFormatError",
    "step",
    "reference_interpret",
    "parse_menu",
    "load_menu",
    "CycleRecord",
    "InteractionSession",
    "run_events",
    "TaskSpec",
    "PRESETS",
    "CATEGORIES",
    "AttemptOutcome",
    "TrialLog",
    "ClassificationError",
    "TrialInputError",
    "classify_attempt",
    "run_trial",
    "summarize",
]
