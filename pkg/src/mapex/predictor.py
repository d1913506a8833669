"""Map prediction interface: probability maps, confidence thresholding, and
the synthesis overlay that keeps observed cells authoritative.

A predictor maps an observation grid to a per-cell obstacle probability in
[0, 1]. Thresholding converts that back into a three-category grid with
per-class confidence bands; everything outside the bands stays unknown.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import FREE, OBSTACLE, UNKNOWN


@dataclass(frozen=True)
class ThresholdConfig:
    delta_free: float = 0.93
    delta_obstacle: float = 0.95

    def __post_init__(self):
        if not (0.0 <= self.delta_free <= 1.0 and 0.0 <= self.delta_obstacle <= 1.0):
            raise ValueError("confidence levels must lie in [0, 1]")
        if (1.0 - self.delta_free) / 2.0 > (1.0 + self.delta_obstacle) / 2.0:
            raise ValueError("free band must not overlap past the obstacle band")

    @property
    def free_cutoff(self) -> float:
        return (1.0 - self.delta_free) / 2.0

    @property
    def obstacle_cutoff(self) -> float:
        return (1.0 + self.delta_obstacle) / 2.0


# preset used by the lower-confidence qualitative runs
RELAXED_THRESHOLDS = ThresholdConfig(delta_free=0.85, delta_obstacle=0.85)


def threshold(prob: np.ndarray, cfg: ThresholdConfig) -> np.ndarray:
    """Categorize probabilities; the obstacle rule (>=) wins at a shared cutoff."""
    out = np.full(prob.shape, UNKNOWN, dtype=np.uint8)
    out[prob <= cfg.free_cutoff] = FREE
    out[prob >= cfg.obstacle_cutoff] = OBSTACLE
    return out


def synthesize(obs: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    """Overlay observations onto a predicted grid; observed cells always win."""
    if obs.shape != predicted.shape:
        raise ValueError(f"shape mismatch: {obs.shape} vs {predicted.shape}")
    return np.where(obs != UNKNOWN, obs, predicted).astype(np.uint8)


def null_predict(obs: np.ndarray) -> np.ndarray:
    """Probabilities that carry no information beyond the observations."""
    prob = np.full(obs.shape, 0.5, dtype=np.float64)
    prob[obs == FREE] = 0.0
    prob[obs == OBSTACLE] = 1.0
    return prob


def oracle_predict(obs: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """Perfect-knowledge probabilities; rejects observations that contradict truth."""
    if obs.shape != truth.shape:
        raise ValueError(f"shape mismatch: {obs.shape} vs {truth.shape}")
    known = obs != UNKNOWN
    if (obs[known] != truth[known]).any():
        raise ValueError("observation map contradicts ground truth")
    return (truth == OBSTACLE).astype(np.float64)


class NullPredictor:
    """Observation-only baseline: thresholding its output reproduces the input."""

    def predict(self, obs: np.ndarray) -> np.ndarray:
        return null_predict(obs)


class OraclePredictor:
    """Upper bound: predicts the ground truth it was given."""

    def __init__(self, truth: np.ndarray):
        self.truth = truth

    def predict(self, obs: np.ndarray) -> np.ndarray:
        return oracle_predict(obs, self.truth)
