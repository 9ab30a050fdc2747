"""Two-hot value coding, multi-horizon discount sets, and calibrated
win-probability decoding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import defaults


@dataclass(frozen=True)
class ValueBins:
    """Evenly spaced bin centers from lo to hi inclusive."""

    n_bins: int = defaults.VALUE_N_BINS
    lo: float = defaults.VALUE_LO
    hi: float = defaults.VALUE_HI

    def __post_init__(self):
        if self.n_bins < 2:
            raise ValueError("need at least two bins")
        if not self.lo < self.hi:
            raise ValueError("lo must be below hi")

    def centers(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_bins)

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n_bins - 1)


def two_hot_encode(value: float, bins: ValueBins) -> np.ndarray:
    """Probability vector with linear-interpolation mass on the two centers
    bracketing ``value`` (clamped into range; exact hits are one-hot)."""
    value = min(max(value, bins.lo), bins.hi)
    position = (value - bins.lo) / bins.spacing
    low = int(position)
    frac = position - low
    out = np.zeros(bins.n_bins)
    if low >= bins.n_bins - 1:
        out[-1] = 1.0
    elif frac == 0.0:
        out[low] = 1.0
    else:
        out[low] = 1.0 - frac
        out[low + 1] = frac
    return out


def two_hot_decode(probs, bins: ValueBins) -> float:
    """Expected value under a distribution over bin centers."""
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (bins.n_bins,):
        raise ValueError(f"expected {bins.n_bins} probabilities")
    if (probs < 0).any() or abs(float(probs.sum()) - 1.0) > 1e-6:
        raise ValueError("probabilities must be a distribution")
    return float(probs @ bins.centers())


@dataclass(frozen=True)
class GammaSet:
    """Discount horizons trained in parallel; one is the evaluation head."""

    gammas: tuple = defaults.GAMMAS
    eval_gamma: float = defaults.EVAL_GAMMA

    def __post_init__(self):
        gs = tuple(self.gammas)
        if any(not 0 < g < 1 for g in gs):
            raise ValueError("discounts must lie in (0, 1)")
        if any(b <= a for a, b in zip(gs, gs[1:])):
            raise ValueError("discounts must be strictly increasing")
        if self.eval_gamma not in gs:
            raise ValueError(f"evaluation discount {self.eval_gamma} missing")
        object.__setattr__(self, "gammas", gs)

    @property
    def eval_index(self) -> int:
        return self.gammas.index(self.eval_gamma)

    def __len__(self) -> int:
        return len(self.gammas)


def win_probability(q_value: float,
                    reward_scale: float = defaults.WIN_PROB_REWARD_SCALE) -> float:
    """Interpret an evaluation-head Q value as a win probability.

    Ignoring the small shaping terms and the discount, the return is
    dominated by the +/-``reward_scale`` terminal bonus, so Q maps
    linearly from [-scale, +scale] onto [0, 1] (clamped).
    """
    p = (q_value + reward_scale) / (2.0 * reward_scale)
    return min(max(p, 0.0), 1.0)


class AutoForfeitMonitor:
    """Fires once the win estimate stays below a threshold for ``patience``
    consecutive turns."""

    def __init__(self, threshold: float = defaults.AUTO_FORFEIT_THRESHOLD,
                 patience: int = defaults.AUTO_FORFEIT_PATIENCE):
        self.threshold = threshold
        self.patience = patience
        self._streak = 0

    def update(self, win_prob: float) -> bool:
        if win_prob < self.threshold:
            self._streak += 1
        else:
            self._streak = 0
        return self._streak >= self.patience

    def reset(self) -> None:
        self._streak = 0
