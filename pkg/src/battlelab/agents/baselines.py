"""The heuristic opponent suite.

Six policies spanning uniform-random play to rule-table scoring. The
deterministic ones (Grunt, GymLeader) break ties alphabetically so their
behavior is a pure function of the visible state.
"""

from __future__ import annotations

from ..engine import ActionChoice, type_effectiveness
from .base import (
    Agent, classify_move, expected_damage, incoming_damage_estimate,
    matchup_score, split_legal,
)


class RandomBaseline(Agent):
    """Uniform over the legal set; the floor of the opponent ladder."""

    name = "randombaseline"
    deterministic = False

    def choose_action(self, state, side, legal, rng):
        return legal[rng.randrange(len(legal))]


class Gen1BossAI(Agent):
    """Mostly random move use, with the classic quirks: stat boosts on the
    battle's second turn, and a preference for super-effective moves."""

    name = "gen1bossai"
    deterministic = False

    def __init__(self, super_effective_weight: float = 0.75):
        self.super_effective_weight = super_effective_weight

    def choose_action(self, state, side, legal, rng):
        moves, _ = split_legal(state, side, legal)
        if not moves:
            return legal[rng.randrange(len(legal))]
        if state.turn == 2:
            boosts = [c for c, m in moves if classify_move(m) == "boost"]
            if boosts:
                return boosts[rng.randrange(len(boosts))]
        defender = state.opponent(side).active
        if defender is not None and not defender.fainted:
            supers = [c for c, m in moves if m.is_damaging
                      and type_effectiveness(m, defender, state.data) > 1.0]
            if supers and rng.random() < self.super_effective_weight:
                return supers[rng.randrange(len(supers))]
        return moves[rng.randrange(len(moves))][0]


class Grunt(Agent):
    """Greedy one-ply damage: always the move with the highest expected
    damage against the visible opposing active; best type matchup when
    forced to switch. Ties break alphabetically."""

    name = "grunt"
    deterministic = True

    def choose_action(self, state, side, legal, rng):
        moves, switches = split_legal(state, side, legal)
        if moves:
            best = max(moves, key=lambda cm: (expected_damage(state, side, cm[1]),
                                              _neg_name(cm[1].id)))
            return best[0]
        return best_matchup_switch(state, side, switches)


def _neg_name(name: str):
    # max() helper: prefer the alphabetically-first name on equal scores
    return tuple(-ord(c) for c in name)


def best_matchup_switch(state, side, switches) -> ActionChoice:
    opp = state.opponent(side).active
    opp_types = opp.spec.types if opp is not None and not opp.fainted else ()

    def score(cm):
        _, mon = cm
        return (matchup_score(state, mon.spec.types, opp_types),
                _neg_name(mon.spec.species))

    return max(switches, key=score)[0]


class GymLeader(Grunt):
    """Grunt plus health awareness.

    Prioritizes offensive stat boosts when the active is very healthy and
    the visible threat is small (boosting deeper the safer it is), heal
    moves when unhealthy and healing outpaces the visible threat, and
    finishing blows over either. Forced replacements weigh bench health
    alongside type matchup. All thresholds are config defaults.
    """

    name = "gymleader"
    deterministic = True

    def __init__(self, boost_threshold: float = 0.9, heal_threshold: float = 0.65,
                 heal_safety: float = 0.4, rest_safety: float = 0.3,
                 deep_boost_safety: float = 0.15, boost_safety: float = 0.25,
                 offensive_stats: tuple = ("atk", "spa"),
                 bench_health_weight: float = 1.5):
        self.boost_threshold = boost_threshold
        self.heal_threshold = heal_threshold
        self.heal_safety = heal_safety
        self.rest_safety = rest_safety
        self.deep_boost_safety = deep_boost_safety
        self.boost_safety = boost_safety
        self.offensive_stats = offensive_stats
        self.bench_health_weight = bench_health_weight

    def choose_action(self, state, side, legal, rng):
        moves, switches = split_legal(state, side, legal)
        mon = state.side(side).active
        opp = state.opponent(side).active
        opp_alive = opp is not None and not opp.fainted
        if not moves and switches:
            opp_types = opp.spec.types if opp_alive else ()

            def replacement(cm):
                _, cand = cm
                return (matchup_score(state, cand.spec.types, opp_types)
                        + self.bench_health_weight * cand.hp_fraction,
                        _neg_name(cand.spec.species))

            return max(switches, key=replacement)[0]
        if moves and mon is not None:
            if opp_alive:
                best = max(expected_damage(state, side, m) for _, m in moves)
                if best >= opp.hp_fraction:
                    return super().choose_action(state, side, legal, rng)
            hp = mon.hp_fraction
            incoming = incoming_damage_estimate(state, side)
            if incoming <= self.deep_boost_safety:
                stage_cap = 6
            elif incoming <= self.boost_safety:
                stage_cap = 2
            else:
                stage_cap = 0
            if hp >= self.boost_threshold and stage_cap > 0:
                for choice, move in sorted(moves, key=lambda cm: cm[0].index):
                    if classify_move(move) != "boost":
                        continue
                    stats = move.effects["boost_self"]["stats"]
                    offensive = [s for s, v in stats.items()
                                 if v > 0 and s in self.offensive_stats]
                    if offensive and max(mon.boosts[s] for s in offensive) < stage_cap:
                        return choice
            if hp <= self.heal_threshold and incoming <= self.heal_safety:
                heals = [(c, m) for c, m in moves
                         if classify_move(m) == "heal"
                         and (not m.effects.get("rest")
                              or incoming <= self.rest_safety)]
                if heals:
                    return sorted(heals, key=lambda cm: cm[0].index)[0][0]
        return super().choose_action(state, side, legal, rng)


class SimpleHeuristics(Agent):
    """Type-matchup switcher with accuracy-weighted damage otherwise."""

    name = "simpleheuristics"
    deterministic = True

    def __init__(self, switch_threshold: float = -1.0,
                 improvement_margin: float = 1.0):
        self.switch_threshold = switch_threshold
        self.improvement_margin = improvement_margin

    def choose_action(self, state, side, legal, rng):
        moves, switches = split_legal(state, side, legal)
        mon = state.side(side).active
        opp = state.opponent(side).active
        opp_types = opp.spec.types if opp is not None and not opp.fainted else ()
        if not moves:
            return best_matchup_switch(state, side, switches)
        if switches and mon is not None and opp_types:
            own_score = matchup_score(state, mon.spec.types, opp_types)
            if own_score <= self.switch_threshold:
                best = max(switches,
                           key=lambda cm: (matchup_score(state, cm[1].spec.types,
                                                         opp_types),
                                           _neg_name(cm[1].spec.species)))
                best_score = matchup_score(state, best[1].spec.types, opp_types)
                if best_score >= own_score + self.improvement_margin:
                    return best[0]

        def weighted(cm):
            _, move = cm
            acc = (move.accuracy or 100) / 100.0
            return (expected_damage(state, side, move) * acc, _neg_name(move.id))

        return max(moves, key=weighted)[0]
