"""Figure rendering for traces and trial results.

Everything draws through the Agg backend so the CLI can run headless; callers
get back the list of files written.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .detector import DetectorConfig, KeyEventRecord, PEAK_KINDS
from .signals import ForceSample
from .trial import CATEGORIES, aggregate

__all__ = ["save_trace_figure", "save_trial_figures"]

_EVENT_COLORS = {
    "ClassicalDepress": "tab:gray",
    "ClassicalRelease": "tab:gray",
    "OnePressEnter": "tab:blue",
    "MediumRepeat": "tab:orange",
    "HardRepeat": "tab:red",
    "OnePressRelease": "tab:blue",
}


def save_trace_figure(
    samples: list[ForceSample],
    events: list[KeyEventRecord],
    path: str,
    config: DetectorConfig | None = None,
) -> str:
    """Force-versus-time plot with detector thresholds and event markers."""
    config = config or DetectorConfig()
    fig, ax = plt.subplots(figsize=(9, 4.5))
    by_key: dict[str, list[ForceSample]] = {}
    for s in samples:
        by_key.setdefault(s.key, []).append(s)
    for key, rows in sorted(by_key.items()):
        ax.plot(
            [r.t_ms for r in rows],
            [r.force_n for r in rows],
            lw=1.2,
            label=f"key '{key}'",
        )
    for level, name in (
        (config.usable_floor_n, "sensor floor"),
        (config.soft_band_max_n, "soft band max / medium"),
        (config.hard_min_apex_n, "hard"),
        (config.usable_ceiling_n, "ceiling"),
    ):
        ax.axhline(level, color="0.75", lw=0.8, ls="--")
        ax.annotate(
            f"{name} ({level:g} N)",
            xy=(0.995, level),
            xycoords=("axes fraction", "data"),
            ha="right",
            va="bottom",
            fontsize=7,
            color="0.45",
        )
    seen = set()
    for ev in events:
        color = _EVENT_COLORS.get(ev.kind, "tab:green")
        label = ev.kind if ev.kind not in seen else None
        seen.add(ev.kind)
        ax.axvline(ev.t_ms, color=color, lw=0.9, alpha=0.7, label=label)
        if ev.kind in PEAK_KINDS and ev.apex_n is not None:
            ax.plot([ev.t_ms], [ev.apex_n], "o", ms=5, color=color)
    ax.set_xlabel("time (ms)")
    ax.set_ylabel("force (N)")
    ax.set_ylim(bottom=0)
    ax.legend(loc="upper left", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_trial_figures(summaries: list[dict], out_dir: str) -> list[str]:
    """Per-log score bars and a failure-category histogram."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    names = [s["log"] for s in summaries]
    scores = [s["score"] for s in summaries]
    attempts = [s["attempts"] for s in summaries]
    fig, ax = plt.subplots(figsize=(8, 4))
    xs = range(len(names))
    ax.bar(xs, attempts, color="0.88", label="attempts")
    ax.bar(xs, scores, color="tab:blue", label="successes")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("attempts")
    ax.set_title("successes per log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out_dir, "scores.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    hist = aggregate(summaries)["histogram"]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(CATEGORIES)), [hist[c] for c in CATEGORIES], color="tab:red", alpha=0.8)
    ax.set_xticks(range(len(CATEGORIES)))
    ax.set_xticklabels(CATEGORIES, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("failures")
    ax.set_title("failure categories across all logs")
    fig.tight_layout()
    path = os.path.join(out_dir, "failure_categories.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
