"""Heuristic agents, the agent registry, and POV hygiene helpers."""

from .base import (
    Agent, classify_move, expected_damage, incoming_damage_estimate,
    matchup_score, pov_projection, split_legal,
)
from .baselines import (
    Gen1BossAI, Grunt, GymLeader, RandomBaseline, SimpleHeuristics,
    best_matchup_switch,
)
from .kaizo import EmeraldKaizo, load_rule_table

AGENT_CLASSES = {
    cls.name: cls
    for cls in (RandomBaseline, Gen1BossAI, Grunt, GymLeader,
                SimpleHeuristics, EmeraldKaizo)
}

# the six policies whose mean win rate forms the composite score
COMPOSITE_SIX = ("randombaseline", "gen1bossai", "grunt", "gymleader",
                 "simpleheuristics", "emeraldkaizo")


def make_agent(name: str, **kwargs) -> Agent:
    try:
        cls = AGENT_CLASSES[name]
    except KeyError:
        raise ValueError(f"unknown agent {name!r}; known: "
                         f"{', '.join(sorted(AGENT_CLASSES))}") from None
    return cls(**kwargs)


__all__ = [
    "Agent", "AGENT_CLASSES", "COMPOSITE_SIX", "EmeraldKaizo", "Gen1BossAI",
    "Grunt", "GymLeader", "RandomBaseline", "SimpleHeuristics",
    "best_matchup_switch", "classify_move", "expected_damage",
    "incoming_damage_estimate", "load_rule_table", "make_agent",
    "matchup_score", "pov_projection", "split_legal",
]
