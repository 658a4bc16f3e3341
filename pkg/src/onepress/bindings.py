"""Virtual-modifier key events and the binding table that maps them to actions.

In-band force peaks act like modifier keys attached to the key that produced
them: a hard peak on `a` resolves like a modified press of `a`. Classical
depresses pass through unmodified.
"""
from __future__ import annotations

from dataclasses import dataclass

from .detector import CLASSICAL_DEPRESS, HARD_REPEAT, MEDIUM_REPEAT, KeyEventRecord

__all__ = [
    "MOD_NONE",
    "MOD_MEDIUM",
    "MOD_HARD",
    "MODIFIERS",
    "NO_ACTION",
    "ModifiedKeyEvent",
    "BindingTable",
    "BindingFormatError",
    "to_modified",
    "resolve",
    "sample_table",
    "parse_bindings",
    "load_bindings",
]

MOD_NONE = "none"
MOD_MEDIUM = "mediumRepeat"
MOD_HARD = "hardRepeat"
MODIFIERS = (MOD_NONE, MOD_MEDIUM, MOD_HARD)

NO_ACTION = "no-action"


class BindingFormatError(ValueError):
    """A binding table file is malformed or contains duplicate rules."""


@dataclass(frozen=True)
class ModifiedKeyEvent:
    key: str
    modifier: str
    t_ms: int

    def __post_init__(self) -> None:
        if self.modifier not in MODIFIERS:
            raise ValueError(f"modifier must be one of {MODIFIERS}, got {self.modifier!r}")


_EVENT_MODIFIER = {
    CLASSICAL_DEPRESS: MOD_NONE,
    MEDIUM_REPEAT: MOD_MEDIUM,
    HARD_REPEAT: MOD_HARD,
}


def to_modified(event: KeyEventRecord) -> ModifiedKeyEvent | None:
    """Map a detector event to a modified key event.

    Releases and one-press boundary events produce nothing: they carry no
    press semantics of their own.
    """
    mod = _EVENT_MODIFIER.get(event.kind)
    if mod is None:
        return None
    return ModifiedKeyEvent(key=event.key, modifier=mod, t_ms=event.t_ms)


class BindingTable:
    """Ordered (modifier, key) -> action rules, at most one rule per pair."""

    def __init__(self, rules: list[tuple[str, str, str]] | None = None) -> None:
        self._rules: dict[tuple[str, str], str] = {}
        self._order: list[tuple[str, str, str]] = []
        for modifier, key, action in rules or []:
            self.add(modifier, key, action)

    def add(self, modifier: str, key: str, action: str) -> None:
        if modifier not in MODIFIERS:
            raise BindingFormatError(f"unknown modifier {modifier!r}, expected one of {MODIFIERS}")
        if not key or not action:
            raise BindingFormatError("key and action must be non-empty")
        if (modifier, key) in self._rules:
            raise BindingFormatError(f"duplicate rule for ({modifier}, {key})")
        self._rules[(modifier, key)] = action
        self._order.append((modifier, key, action))

    def rules(self) -> list[tuple[str, str, str]]:
        return list(self._order)

    def lookup(self, modifier: str, key: str) -> str | None:
        return self._rules.get((modifier, key))

    def __len__(self) -> int:
        return len(self._order)


def resolve(event: ModifiedKeyEvent, table: BindingTable) -> str:
    """Resolve a modified key event to an action identifier.

    Exact (modifier, key) rules win; unmodified presses without a rule fall
    back to the identity pass-through `type:<key>`; modified presses without
    a rule resolve to NO_ACTION.
    """
    action = table.lookup(event.modifier, event.key)
    if action is not None:
        return action
    if event.modifier == MOD_NONE:
        return f"type:{event.key}"
    return NO_ACTION


def sample_table() -> BindingTable:
    """The shipped example table: delete-without-trash, one-press uppercase,
    close-window, and window switching."""
    return BindingTable(
        [
            (MOD_HARD, "del", "permanent-delete"),
            (MOD_HARD, "a", "type-uppercase-A"),
            (MOD_HARD, "f4", "close-window"),
            (MOD_MEDIUM, "tab", "next-window"),
        ]
    )


def parse_bindings(text: str) -> BindingTable:
    """Parse a line-oriented binding table.

    One rule per line: ``<modifier> <key> <action>`` separated by whitespace;
    blank lines and `#` comments are skipped. Duplicate (modifier, key) pairs
    are rejected with the line number.
    """
    table = BindingTable()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise BindingFormatError(
                f"line {line_no}: expected '<modifier> <key> <action>', got {len(parts)} fields"
            )
        modifier, key, action = parts
        try:
            table.add(modifier, key, action)
        except BindingFormatError as exc:
            raise BindingFormatError(f"line {line_no}: {exc}") from None
    return table


def load_bindings(path: str) -> BindingTable:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_bindings(fp.read())
