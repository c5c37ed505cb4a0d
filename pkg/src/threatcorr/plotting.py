"""Matplotlib figures for a resolution run, written next to the report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .resolver import CONFLICT_TYPES, ResolutionTrace  # noqa: E402

_PASS = {1: "I", 2: "II", 3: "III"}
# fixed metadata keeps PNG bytes stable between runs
_META = {"Software": None}


def _labels(trace: ResolutionTrace) -> list[str]:
    out = []
    for i, s in enumerate(trace.steps):
        label = f"{i}: pass {_PASS[s.pass_number]}"
        if s.test:
            label += f"\n{s.test}"
        out.append(label)
    return out


def belief_figure(trace: ResolutionTrace, path: Path) -> Path:
    """Bel/Pl intervals for U, M, D at every step of the run."""
    labels = _labels(trace)
    x = np.arange(len(trace.steps))
    fig, ax = plt.subplots(figsize=(max(5.0, 2.2 * len(x)), 4.0))
    width = 0.25
    for k, (name, color) in enumerate((("U", "tab:blue"), ("M", "tab:orange"), ("D", "tab:green"))):
        b = np.array([getattr(s.report, f"bel_{name.lower()}") for s in trace.steps])
        p = np.array([getattr(s.report, f"pl_{name.lower()}") for s in trace.steps])
        pos = x + (k - 1) * width
        ax.bar(pos, b, width, color=color, label=f"Bel({name})")
        ax.bar(pos, p - b, width, bottom=b, color=color, alpha=0.3, label=f"Pl({name}) - Bel({name})")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_ylim(0, 1)
    ax.set_ylabel("belief")
    ax.legend(fontsize=7, ncol=3, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def conflict_figure(trace: ResolutionTrace, path: Path) -> Path:
    """Conflict per step stacked by conflict type, against the threshold."""
    labels = _labels(trace)
    x = np.arange(len(trace.steps))
    fig, ax = plt.subplots(figsize=(max(5.0, 2.2 * len(x)), 4.0))
    if all(s.attribution is not None for s in trace.steps):
        bottom = np.zeros(len(x))
        cmap = plt.get_cmap("tab10")
        for t in CONFLICT_TYPES:
            h = np.array([s.attribution.mass_by_type[t] for s in trace.steps])
            ax.bar(x, h, 0.5, bottom=bottom, color=cmap(t - 1), label=f"type {t}")
            bottom += h
    else:
        ax.bar(x, [s.conflict for s in trace.steps], 0.5, color="tab:gray", label="conflict")
    ax.axhline(trace.threshold, color="k", linestyle="--", linewidth=1, label="threshold")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_ylabel("mass on the empty set")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def write_figures(trace: ResolutionTrace, directory: str | Path, stem: str) -> tuple[str, ...]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    return (
        str(belief_figure(trace, d / f"{stem}-beliefs.png")),
        str(conflict_figure(trace, d / f"{stem}-conflict.png")),
    )
