"""Shared fixtures: scripted teams, a tiny synthetic stats table, and
helpers for driving battles."""

from __future__ import annotations

import random

import pytest

from battlelab.engine import (
    PokemonSpec, get_gen, legal_actions, must_act, start_battle, step,
)
from battlelab.inference import UsageStats


def make_team(gen, entries):
    """Build specs from (species, moves) pairs using table defaults."""
    data = get_gen(gen)
    team = []
    for species, moves in entries:
        sd = data.get_species(species)
        team.append(PokemonSpec(species=species, name=sd.name,
                                types=sd.types, moves=list(moves)))
    return team


@pytest.fixture
def gen1_team_a():
    return make_team(1, [
        ("tauros", ["bodyslam", "earthquake", "blizzard", "fireblast"]),
        ("snorlax", ["bodyslam", "rest", "earthquake", "selfdestruct"]),
        ("chansey", ["softboiled", "icebeam", "thunderwave", "thunderbolt"]),
    ])


@pytest.fixture
def gen1_team_b():
    return make_team(1, [
        ("starmie", ["recover", "blizzard", "thunderbolt", "thunderwave"]),
        ("exeggutor", ["sleeppowder", "psychic", "explosion", "stunspore"]),
        ("rhydon", ["earthquake", "bodyslam", "rockslide", "rest"]),
    ])


def run_random_battle(format_id, team1, team2, seed, agent_seed=0,
                      max_turns=None):
    """Drive a battle with uniformly random legal actions; returns
    (final_state, all_events, step_results)."""
    state, events = start_battle(format_id, team1, team2,
                                 names=("Alice", "Bob"), seed=seed,
                                 max_turns=max_turns)
    rnd = random.Random(agent_seed)
    results = []
    while state.ongoing:
        c1 = rnd.choice(legal_actions(state, "p1")) if must_act(state, "p1") else None
        c2 = rnd.choice(legal_actions(state, "p2")) if must_act(state, "p2") else None
        res = step(state, c1, c2)
        results.append(res)
        events.extend(res.events)
    return state, events, results


TINY_STATS = {
    "schema_version": 1,
    "version": "test-0.1",
    "formats": {
        "gen1ou": {
            "species_usage": {"tauros": 0.30, "snorlax": 0.25, "chansey": 0.20,
                              "starmie": 0.15, "exeggutor": 0.06,
                              "alakazam": 0.03, "rhydon": 0.01},
            "teammates": {
                "tauros": {"chansey": 0.7, "snorlax": 0.5, "starmie": 0.2},
                "snorlax": {"chansey": 0.6, "starmie": 0.4},
                "chansey": {"tauros": 0.7, "snorlax": 0.6},
            },
            "species": {
                "tauros": {"moves": {"bodyslam": 0.24, "earthquake": 0.22,
                                     "blizzard": 0.2, "fireblast": 0.1,
                                     "thunderbolt": 0.05}},
                "snorlax": {"moves": {"bodyslam": 0.24, "rest": 0.2,
                                      "earthquake": 0.18, "amnesia": 0.1,
                                      "selfdestruct": 0.08}},
                "chansey": {"moves": {"softboiled": 0.24, "icebeam": 0.2,
                                      "thunderwave": 0.18, "thunderbolt": 0.1}},
                "starmie": {"moves": {"recover": 0.24, "blizzard": 0.2,
                                      "thunderbolt": 0.18, "psychic": 0.1}},
                "exeggutor": {"moves": {"sleeppowder": 0.24, "psychic": 0.22,
                                        "explosion": 0.2, "stunspore": 0.1}},
                "alakazam": {"moves": {"psychic": 0.25, "recover": 0.22,
                                       "thunderwave": 0.15,
                                       "seismictoss": 0.1}},
                "rhydon": {"moves": {"earthquake": 0.25, "rockslide": 0.2,
                                     "bodyslam": 0.15, "rest": 0.05}},
            },
        },
    },
}


@pytest.fixture
def tiny_stats():
    return UsageStats(TINY_STATS)
