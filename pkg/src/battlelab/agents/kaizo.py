"""Rule-table action scorer, modeled on difficulty-hack boss AI.

Every legal action is scored against a data-driven rule set; rules are
conditional bonuses/penalties keyed on state predicates. The table is an
external JSON file so coverage can grow without code changes. An action
with no matching rules scores 0 (neutral, never an error); ties break by
a seeded random draw.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Optional

from ..engine import type_effectiveness
from .base import Agent, classify_move, split_legal


def load_rule_table(path: Optional[str] = None) -> list[dict]:
    if path is None:
        text = resources.files("battlelab.agents.rules") \
            .joinpath("emeraldkaizo.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text)
    return doc["rules"]


class EmeraldKaizo(Agent):
    name = "emeraldkaizo"
    deterministic = False

    def __init__(self, rules: Optional[list[dict]] = None):
        self.rules = load_rule_table() if rules is None else rules

    def choose_action(self, state, side, legal, rng):
        moves, switches = split_legal(state, side, legal)
        scored = []
        for choice, move in moves:
            facts = self._move_facts(state, side, move)
            scored.append((choice, self._score(facts)))
        for choice, mon in switches:
            facts = self._switch_facts(state, side, mon)
            scored.append((choice, self._score(facts)))
        best = max(score for _, score in scored)
        top = [choice for choice, score in scored if score == best]
        return top[rng.randrange(len(top))]

    def _score(self, facts: dict) -> float:
        total = 0.0
        for rule in self.rules:
            if _matches(rule.get("when", {}), facts):
                total += rule.get("score", 0)
        return total

    def _move_facts(self, state, side, move) -> dict:
        mon = state.side(side).active
        opp = state.opponent(side).active
        opp_alive = opp is not None and not opp.fainted
        eff = type_effectiveness(move, opp, state.data) if \
            (opp_alive and move.is_damaging) else None
        boost = move.effects.get("boost_self", {}).get("stats", {})
        own_stage = max((mon.boosts[s] for s in boost), default=0) if mon else 0
        return {
            "action": "move",
            "move_class": classify_move(move),
            "move_type": move.type,
            "effectiveness": eff,
            "own_hp": mon.hp_fraction if mon else 0.0,
            "opp_hp": opp.hp_fraction if opp_alive else 0.0,
            "opp_has_status": bool(opp_alive and opp.status != "none"),
            "own_boost_stage": own_stage,
        }

    def _switch_facts(self, state, side, mon) -> dict:
        own = state.side(side).active
        opp = state.opponent(side).active
        return {
            "action": "switch",
            "move_class": None,
            "move_type": None,
            "effectiveness": None,
            "own_hp": own.hp_fraction if own else 0.0,
            "opp_hp": opp.hp_fraction if opp is not None and not opp.fainted else 0.0,
            "opp_has_status": bool(opp is not None and not opp.fainted
                                   and opp.status != "none"),
            "own_boost_stage": 0,
        }


def _matches(when: dict, facts: dict) -> bool:
    for key, want in when.items():
        if key == "min_effectiveness":
            if facts["effectiveness"] is None or facts["effectiveness"] < want:
                return False
        elif key == "max_effectiveness":
            if facts["effectiveness"] is None or facts["effectiveness"] > want:
                return False
        elif key == "own_hp_min":
            if facts["own_hp"] < want:
                return False
        elif key == "own_hp_max":
            if facts["own_hp"] > want:
                return False
        elif key == "opp_hp_min":
            if facts["opp_hp"] < want:
                return False
        elif key == "opp_hp_max":
            if facts["opp_hp"] > want:
                return False
        elif key == "own_boost_stage_max":
            if facts["own_boost_stage"] > want:
                return False
        elif key in facts:
            if facts[key] != want:
                return False
        else:
            return False  # unknown predicate never matches
    return True
