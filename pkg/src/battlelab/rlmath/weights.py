"""Advantage-weighted behavior cloning math.

The actor loss family is

    L = -w(h, a) * log pi(a | h) - lambda * E_{a' ~ pi}[Q(h, a')]

with A(h, a) = Q(h, a) - E_{a' ~ pi}[Q(h, a')] estimated by the critic
(ensemble means first). Four weight configurations:

    IL            w = 1,                    lambda = 0
    Exp           w = clip(exp(beta * A)),  lambda = 0
    Binary        w = [A > 0],              lambda = 0
    Binary+MaxQ   w = [A > 0],              lambda > 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import defaults

KINDS = ("IL", "Exp", "Binary", "BinaryMaxQ")
PROB_TOLERANCE = 1e-6


@dataclass(frozen=True)
class WeightConfig:
    kind: str
    beta: float = defaults.EXP_BETA
    clip_lo: float = defaults.EXP_CLIP_LO
    clip_hi: float = defaults.EXP_CLIP_HI
    lam: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.clip_lo <= 0:
            raise ValueError("clip_lo must be positive")
        if self.clip_lo > self.clip_hi:
            raise ValueError("clip_lo must not exceed clip_hi")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")
        if self.lam != 0 and self.kind != "BinaryMaxQ":
            raise ValueError("only BinaryMaxQ carries a MaxQ term")

    # ---------------------------------------------------------- presets
    @classmethod
    def il(cls) -> "WeightConfig":
        return cls(kind="IL")

    @classmethod
    def exp(cls, beta: float = defaults.EXP_BETA,
            clip_lo: float = defaults.EXP_CLIP_LO,
            clip_hi: float = defaults.EXP_CLIP_HI) -> "WeightConfig":
        return cls(kind="Exp", beta=beta, clip_lo=clip_lo, clip_hi=clip_hi)

    @classmethod
    def exp_extreme(cls) -> "WeightConfig":
        return cls(kind="Exp", beta=defaults.EXP_EXTREME_BETA,
                   clip_hi=defaults.EXP_EXTREME_CLIP_HI)

    @classmethod
    def binary(cls) -> "WeightConfig":
        return cls(kind="Binary")

    @classmethod
    def binary_maxq(cls, lam: float = defaults.BINARY_MAXQ_LAMBDA) -> "WeightConfig":
        return cls(kind="BinaryMaxQ", lam=lam)


def advantage(q_of_action, q_all, policy_probs) -> float:
    """A = Q(h, a) - E_{a' ~ pi}[Q(h, a')].

    ``q_all`` may be per-action values ``(A,)`` or ensemble samples
    ``(E, A)``; ensemble members are averaged first, as is an ensemble
    ``q_of_action``. ``policy_probs`` must sum to 1 over the actions.
    """
    q_all = np.asarray(q_all, dtype=float)
    if q_all.ndim == 2:
        q_all = q_all.mean(axis=0)
    elif q_all.ndim != 1:
        raise ValueError(f"q_all must be 1- or 2-dimensional, got {q_all.ndim}")
    probs = np.asarray(policy_probs, dtype=float)
    if probs.shape != q_all.shape:
        raise ValueError("policy_probs and q_all must align")
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise ValueError(f"policy probabilities sum to {total}, not 1")
    q_a = float(np.mean(q_of_action))
    return q_a - float(probs @ q_all)


def actor_weight(cfg: WeightConfig, advantage_value: float) -> float:
    """The BC re-weighting w(h, a) for one decision."""
    if cfg.kind == "IL":
        return 1.0
    if cfg.kind == "Exp":
        return min(max(math.exp(cfg.beta * advantage_value), cfg.clip_lo),
                   cfg.clip_hi)
    # Binary and BinaryMaxQ: strict inequality
    return 1.0 if advantage_value > 0 else 0.0


def actor_loss_terms(cfg: WeightConfig, logpi_of_action: float,
                     advantage_value: float,
                     expected_q_under_pi: float) -> tuple[float, float]:
    """(bc_term, maxq_term) for one timestep; the loss is their sum, meaned
    over timesteps by the caller."""
    if logpi_of_action > 0:
        raise ValueError("log-probabilities cannot be positive")
    bc = -actor_weight(cfg, advantage_value) * logpi_of_action
    maxq = -cfg.lam * expected_q_under_pi
    return bc, maxq


def td_target(reward: float, gamma: float, bootstrap_q: float,
              done: bool) -> float:
    """One-step temporal-difference target: r + (1 - done) * gamma * Q'."""
    return reward + (0.0 if done else gamma * bootstrap_q)
