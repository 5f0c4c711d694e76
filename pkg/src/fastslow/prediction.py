"""Supervised benchmark contrasting next-action and next-state prediction.

1000 random (start, goal) pairs on an n-by-n grid are labelled by the greedy
teacher, first preferring the x axis. Training runs for a fixed number of
epochs, the preference flips to the y axis, and training continues for as
many epochs again; the per-epoch accuracy series shows both the initial
convergence speed and the adaptation to the label change.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .agent import derive_seed
from .neural import MLP, Adam, train_on_arrays
from .oracle import AxisBias, greedy_label, greedy_next_state

ACTION_EPOCHS_PER_PHASE = 50
STATE_EPOCHS_PER_PHASE = 200
BATCH_SIZE = 32
DATASET_SIZE = 1000


@dataclass(frozen=True)
class BenchDataset:
    """Sampled pairs plus teacher labels materialized for both axis biases."""

    n: int
    starts: np.ndarray  # (count, 2) ints
    goals: np.ndarray  # (count, 2) ints
    action_labels: dict[AxisBias, np.ndarray]  # (count,)
    state_labels: dict[AxisBias, np.ndarray]  # (count, 2)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    accuracy: float
    phase: int


def generate_dataset(n: int, count: int = DATASET_SIZE, rng=None) -> BenchDataset:
    """Uniform (start, goal) pairs; start may equal goal."""
    if n < 2:
        raise ValueError("grid size must be at least 2")
    rng = np.random.default_rng(rng)
    starts = rng.integers(0, n, size=(count, 2))
    goals = rng.integers(0, n, size=(count, 2))
    action_labels = {}
    state_labels = {}
    for bias in AxisBias:
        action_labels[bias] = np.array(
            [int(greedy_label(tuple(s), tuple(g), bias)) for s, g in zip(starts, goals)]
        )
        state_labels[bias] = np.array(
            [greedy_next_state(tuple(s), tuple(g), bias) for s, g in zip(starts, goals)]
        )
    return BenchDataset(n, starts, goals, action_labels, state_labels)


def _accuracy(net: MLP, x: np.ndarray, targets: np.ndarray) -> float:
    """Mean over heads of the fraction of argmax hits (full dataset)."""
    probs = net.forward_batch(x)
    hits = [np.mean(p.argmax(axis=1) == targets[:, i]) for i, p in enumerate(probs)]
    return float(np.mean(hits))


def _run_experiment(
    net: MLP,
    data: BenchDataset,
    targets_per_phase: list[np.ndarray],
    epochs_per_phase: int,
    batch_size: int,
    seed: int,
) -> list[EpochRecord]:
    x = net.encode_coords(data.starts, data.goals)
    adam = Adam()
    shuffle_rng = np.random.default_rng(derive_seed(seed, 71))
    records = [EpochRecord(0, _accuracy(net, x, targets_per_phase[0]), 1)]
    epoch = 0
    for phase, targets in enumerate(targets_per_phase, start=1):
        for _ in range(epochs_per_phase):
            order = shuffle_rng.permutation(len(x))
            for lo in range(0, len(order), batch_size):
                batch = order[lo : lo + batch_size]
                train_on_arrays(net, adam, x[batch], targets[batch])
            epoch += 1
            records.append(EpochRecord(epoch, _accuracy(net, x, targets), phase))
    return records


def run_action_experiment(
    n: int,
    seed: int = 0,
    epochs_per_phase: int = ACTION_EPOCHS_PER_PHASE,
    batch_size: int = BATCH_SIZE,
    count: int = DATASET_SIZE,
) -> list[EpochRecord]:
    """Train the 5-way action head on x-first labels, flip to y-first halfway."""
    data = generate_dataset(n, count=count, rng=derive_seed(seed, 70))
    net = MLP(heads=(5,), scale=n - 1, rng=derive_seed(seed, 72))
    targets = [data.action_labels[bias].reshape(-1, 1) for bias in (AxisBias.X_FIRST, AxisBias.Y_FIRST)]
    return _run_experiment(net, data, targets, epochs_per_phase, batch_size, seed)


def run_state_experiment(
    n: int,
    seed: int = 0,
    epochs_per_phase: int = STATE_EPOCHS_PER_PHASE,
    batch_size: int = BATCH_SIZE,
    count: int = DATASET_SIZE,
) -> list[EpochRecord]:
    """Same protocol with the two-headed (x-class, y-class) next-state predictor."""
    data = generate_dataset(n, count=count, rng=derive_seed(seed, 70))
    net = MLP(heads=(n, n), scale=n - 1, rng=derive_seed(seed, 72))
    targets = [data.state_labels[bias] for bias in (AxisBias.X_FIRST, AxisBias.Y_FIRST)]
    return _run_experiment(net, data, targets, epochs_per_phase, batch_size, seed)


def epochs_to_threshold(
    records: list[EpochRecord], phase: int, threshold: float = 0.99
) -> int | None:
    """Epochs into the given phase until accuracy first reaches the threshold.

    Counts from the start of the phase (the pre-training epoch-0 record never
    counts); None when the threshold is never reached within the phase.
    """
    offset = None
    for r in records:
        if r.phase == phase and r.epoch > 0:
            if offset is None:
                offset = r.epoch - 1
            if r.accuracy >= threshold:
                return r.epoch - offset
    return None


def write_series_csv(records: list[EpochRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "accuracy", "phase"])
        for r in records:
            writer.writerow([r.epoch, f"{r.accuracy:.6f}", r.phase])
