"""Glicko-1 ratings and the ladder's GXE metric.

The period update follows the standard Glicko-1 system: optional
pre-period deviation inflation, g(RD) attenuation of each opponent,
expected scores, the d^2 information term, then the rating and RD
updates. GXE implements the ladder's published formula, which estimates
the chance of beating a randomly sampled opponent and is undefined while
the deviation is above the provisional cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

Q = math.log(10) / 400.0
INITIAL_RATING = 1500.0
INITIAL_RD = 350.0
DEFAULT_RD_FLOOR = 25.0
GXE_RD_CUTOFF = 100.0


@dataclass(frozen=True)
class RatingState:
    rating: float = INITIAL_RATING
    rd: float = INITIAL_RD
    last_period: int = 0


def g_attenuation(rd: float) -> float:
    return 1.0 / math.sqrt(1.0 + 3.0 * Q * Q * rd * rd / math.pi ** 2)


def expected_score(rating: float, opp_rating: float, opp_rd: float) -> float:
    return 1.0 / (1.0 + 10 ** (-g_attenuation(opp_rd) * (rating - opp_rating) / 400.0))


def glicko1_update(state: RatingState, opponents, c: float = 0.0,
                   rd_floor: float = DEFAULT_RD_FLOOR) -> RatingState:
    """One rating period against ``opponents``: (rating, rd, score) triples
    with scores in {0, 0.5, 1}. With no games, only the deviation inflates
    (by ``c``, capped at the initial deviation).
    """
    rd = min(math.sqrt(state.rd * state.rd + c * c), INITIAL_RD)
    period = state.last_period + 1
    if not opponents:
        return RatingState(rating=state.rating, rd=max(rd, rd_floor),
                           last_period=period)
    for _, _, score in opponents:
        if score not in (0, 0.5, 1):
            raise ValueError(f"score {score!r} not in {{0, 0.5, 1}}")
    info = 0.0
    swing = 0.0
    for opp_rating, opp_rd, score in opponents:
        g = g_attenuation(opp_rd)
        e = expected_score(state.rating, opp_rating, opp_rd)
        info += g * g * e * (1.0 - e)
        swing += g * (score - e)
    d_squared = 1.0 / (Q * Q * info)
    denom = 1.0 / (rd * rd) + 1.0 / d_squared
    new_rating = state.rating + (Q / denom) * swing
    new_rd = max(math.sqrt(1.0 / denom), rd_floor)
    return RatingState(rating=new_rating, rd=new_rd, last_period=period)


def gxe(state: RatingState, rd_cutoff: float = GXE_RD_CUTOFF) -> Optional[float]:
    """Ladder win-chance estimate in percent (two decimals), or None while
    the rating is provisional (RD above the cutoff). Exactly 50.00 at
    rating 1500 for any defined RD."""
    if state.rd > rd_cutoff:
        return None
    exponent = ((1500.0 - state.rating) * 10.0
                / math.sqrt(100000.0 + 8122.0 * state.rd * state.rd))
    value = 10000.0 / (1.0 + 10 ** exponent)
    return math.floor(value + 0.5) / 100.0
