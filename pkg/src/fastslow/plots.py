"""Matplotlib report figures rendered next to the CSV outputs."""
from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .agent import EpisodeResult


def steps_per_episode_figure(results: Sequence[EpisodeResult], path, title: str | None = None) -> None:
    """Steps taken per episode (green) against the BFS minimum (blue)."""
    episodes = [r.episode for r in results]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(episodes, [r.min_steps for r in results], color="tab:blue", label="minimum steps")
    ax.plot(episodes, [r.steps for r in results], color="tab:green", label="steps taken")
    ax.set_xlabel("episode")
    ax.set_ylabel("steps")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def accuracy_figure(records, path, switch_epoch: int | None = None, title: str | None = None) -> None:
    """Accuracy per epoch with an optional marker at the label switch."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r.epoch for r in records], [r.accuracy for r in records], color="tab:blue")
    if switch_epoch is not None:
        ax.axvline(switch_epoch, color="tab:red", linestyle="--", linewidth=1, label="label switch")
        ax.legend()
    ax.set_xlabel("epoch")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0.0, 1.05)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sweep_figure(param: str, values: Sequence, summaries, path) -> None:
    """Solve rate and steps above minimum against a single swept parameter."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(values, [s.solve_rate_total for s in summaries], marker="o", color="tab:green")
    ax1.set_xlabel(param)
    ax1.set_ylabel("solve rate (%)")
    ax2.plot(values, [s.steps_above_total for s in summaries], marker="o", color="tab:blue")
    ax2.set_xlabel(param)
    ax2.set_ylabel("steps above minimum")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
