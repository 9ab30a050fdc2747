"""Shaped reward: health, status, and faint differentials plus the
win/loss bonus.

    R = r_hp + 0.5 * r_stat + r_faint + 100 * r_win

r_hp is the net HP fraction the POV side gained minus the opponent's net
gain, over pokemon on the field during the step; r_stat is the change in
binary status presence of the two actives (each term in {-1, 0, 1});
r_faint is opponent faints minus own faints; r_win is +1/-1/0 and appears
only at the terminal step.
"""

from __future__ import annotations

from ..engine import TurnDeltas

WIN_BONUS = 100.0
STATUS_WEIGHT = 0.5


def compute_reward(pov: TurnDeltas, opp: TurnDeltas, win: int = 0) -> float:
    """Reward for one decision step from the POV side's perspective.

    ``win`` is +1, -1, or 0 and must be nonzero only at the terminal step.
    """
    r_hp = pov.hp_delta - opp.hp_delta
    r_stat = ((int(opp.status_end) - int(opp.status_start))
              - (int(pov.status_end) - int(pov.status_start)))
    r_faint = opp.faints - pov.faints
    return r_hp + STATUS_WEIGHT * r_stat + r_faint + WIN_BONUS * win
