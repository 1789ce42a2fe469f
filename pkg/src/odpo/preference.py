"""Simulated labeler: Bernoulli preference feedback on difference arms.

A duel on b = a^1 - a^2 is won by a^1 with probability sigmoid(<theta, b>);
the binary outcome Y records that event.  All sampling goes through an
explicit generator so replicated runs are reproducible, and each sample
consumes exactly one uniform draw.
"""

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .instances import DifferenceArm, Instance


def sigmoid(x):
    """1 / (1 + exp(-x)), exponentiating only negative magnitudes."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    if out.ndim == 0:
        return float(out)
    return out


def sigmoid_prime(x):
    """Derivative sigmoid(x) * (1 - sigmoid(x)), stable for large |x|."""
    t = np.exp(-np.abs(np.asarray(x, dtype=float)))
    out = t / (1.0 + t) ** 2
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class PreferenceSample:
    """One labeled duel: the presented difference arm and its outcome."""

    arm: DifferenceArm
    outcome: int  # 1 iff the first element of the pair won
    draw_index: int


def sample_preference(
    theta_star: np.ndarray,
    arm: DifferenceArm,
    rng: np.random.Generator,
    draw_index: int = 0,
) -> PreferenceSample:
    """Draw Y ~ Bernoulli(sigmoid(<theta_star, b>)); one uniform consumed."""
    p = sigmoid(float(np.dot(theta_star, arm.vector)))
    outcome = int(rng.random() < p)
    return PreferenceSample(arm=arm, outcome=outcome, draw_index=draw_index)


def collect_feedback(
    instance: Instance,
    allocation: Iterable[tuple[int, int]],
    rng: np.random.Generator,
) -> list[PreferenceSample]:
    """Label every allocated duel.

    ``allocation`` holds (arm_index, count) pairs; samples are emitted in
    (arm index, repetition) order with a running draw index, one uniform per
    sample.
    """
    samples: list[PreferenceSample] = []
    t = 0
    for arm_index, count in sorted(allocation):
        if count < 1:
            raise ValueError(f"count for arm {arm_index} must be >= 1")
        arm = instance.diff_arms[arm_index]
        p = sigmoid(float(np.dot(instance.theta_star, arm.vector)))
        draws = rng.random(count)
        for u in draws:
            samples.append(
                PreferenceSample(arm=arm, outcome=int(u < p), draw_index=t)
            )
            t += 1
    return samples


def samples_to_arrays(
    samples: Sequence[PreferenceSample], dimension: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stack samples into (diffs, outcomes) arrays for the estimator."""
    if not samples:
        return np.zeros((0, dimension)), np.zeros(0)
    diffs = np.stack([s.arm.vector for s in samples])
    wins = np.array([float(s.outcome) for s in samples])
    return diffs, wins


def write_sample_log(samples: Sequence[PreferenceSample], path) -> None:
    """CSV log: draw_index, context_id, i, j, y."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["draw_index", "context_id", "i", "j", "y"])
        for s in samples:
            n, i, j = s.arm.origin
            writer.writerow([s.draw_index, n, i, j, s.outcome])
