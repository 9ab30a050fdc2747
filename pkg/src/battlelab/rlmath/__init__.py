"""Offline-RL math: advantage weights, TD targets, two-hot values,
multi-horizon discounts, and win-probability decoding. Pure functions;
external trainers plug their own tensors into these scalar contracts."""

from . import defaults
from .values import (
    AutoForfeitMonitor, GammaSet, ValueBins, two_hot_decode, two_hot_encode,
    win_probability,
)
from .weights import (
    WeightConfig, actor_loss_terms, actor_weight, advantage, td_target,
)

__all__ = [
    "AutoForfeitMonitor", "GammaSet", "ValueBins", "WeightConfig",
    "actor_loss_terms", "actor_weight", "advantage", "defaults", "td_target",
    "two_hot_decode", "two_hot_encode", "win_probability",
]
