"""Heuristic agents: choice rules, determinism, legality, POV hygiene."""

import random
from collections import Counter

import pytest

from battlelab.agents import (
    EmeraldKaizo, Gen1BossAI, Grunt, GymLeader, RandomBaseline,
    SimpleHeuristics, make_agent, pov_projection,
)
from battlelab.engine import (
    ActionChoice, legal_actions, must_act, start_battle, step,
)

from conftest import make_team


def fresh_state(team1=None, team2=None, format_id="gen1ou", seed=1):
    team1 = team1 or make_team(1, [
        ("tauros", ["bodyslam", "earthquake", "blizzard", "fireblast"]),
        ("snorlax", ["bodyslam", "rest", "amnesia", "selfdestruct"]),
        ("chansey", ["softboiled", "icebeam", "thunderwave", "thunderbolt"]),
    ])
    team2 = team2 or make_team(1, [
        ("starmie", ["recover", "blizzard", "thunderbolt", "surf"]),
        ("rhydon", ["earthquake", "rockslide", "bodyslam", "rest"]),
    ])
    state, _ = start_battle(format_id, team1, team2, seed=seed)
    return state


class TestRandomBaseline:
    def test_singleton(self):
        agent = RandomBaseline()
        state = fresh_state()
        only = [ActionChoice(0)]
        assert agent.choose_action(state, "p1", only, random.Random(0)) == only[0]

    def test_seeded_reproducible(self):
        agent = RandomBaseline()
        state = fresh_state()
        legal = legal_actions(state, "p1")
        a = agent.choose_action(state, "p1", legal, random.Random(7))
        b = agent.choose_action(state, "p1", legal, random.Random(7))
        assert a == b

    def test_uniform_chi_square(self):
        """Empirical distribution over 10k draws is uniform within a
        generous chi-square bound (8 dof, p=0.001 cutoff ~26.1)."""
        agent = RandomBaseline()
        state = fresh_state(team1=make_team(1, [
            (s, ["bodyslam", "earthquake", "blizzard", "thunderbolt"])
            for s in ("tauros", "snorlax", "chansey", "starmie",
                      "exeggutor", "alakazam")]))
        legal = legal_actions(state, "p1")
        assert len(legal) == 9
        rng = random.Random(123)
        counts = Counter(agent.choose_action(state, "p1", legal, rng).index
                         for _ in range(10_000))
        expected = 10_000 / 9
        chi2 = sum((counts[i] - expected) ** 2 / expected for i in range(9))
        assert chi2 < 26.1


class TestGen1BossAI:
    def test_turn_two_prefers_boost(self):
        agent = Gen1BossAI()
        state = fresh_state()
        step(state, ActionChoice(5), ActionChoice(4))  # bench sorts by species
        assert state.turn == 1
        state.turn = 2
        side = state.side("p1")
        legal = legal_actions(state, "p1")
        # snorlax is now active and has amnesia
        assert side.active.spec.species == "snorlax"
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        assert resolve_choice(state, "p1", choice) == ("move", "amnesia")

    def test_super_effective_elevated_frequency(self):
        """One super-effective move among neutrals is picked well above the
        uniform 1-in-4 rate."""
        team1 = make_team(1, [("jolteon", ["thunderbolt", "bodyslam",
                                           "bite", "agility"])])
        team2 = make_team(1, [("gyarados", ["surf"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        state.turn = 5
        agent = Gen1BossAI(super_effective_weight=0.75)
        legal = legal_actions(state, "p1")
        rng = random.Random(0)
        picks = Counter(agent.choose_action(state, "p1", legal, rng).index
                        for _ in range(4000))
        from battlelab.engine import move_slot_order
        slots = move_slot_order(state.side("p1").active.spec.moves)
        tb = slots.index("thunderbolt")
        assert picks[tb] / 4000 > 0.6  # 0.75 + 0.25/4 expected ~0.8125

    def test_no_preference_fallback_uniform_moves(self):
        team1 = make_team(1, [("tauros", ["bodyslam", "strength"])])
        team2 = make_team(1, [("snorlax", ["rest"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        state.turn = 5
        agent = Gen1BossAI()
        legal = legal_actions(state, "p1")
        rng = random.Random(0)
        picks = Counter(agent.choose_action(state, "p1", legal, rng).index
                        for _ in range(2000))
        assert set(picks) == {0, 1}
        assert abs(picks[0] - picks[1]) < 300


class TestGrunt:
    def test_argmax_damage_alphabetical_tiebreak(self):
        """Two equal-damage moves: the alphabetically first wins."""
        team1 = make_team(1, [("chansey", ["icebeam", "thunderbolt"])])
        team2 = make_team(1, [("tauros", ["bodyslam"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        agent = Grunt()
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        # same power/type-effectiveness vs tauros, icebeam < thunderbolt
        assert resolve_choice(state, "p1", choice) == ("move", "icebeam")

    def test_all_immune_still_picks_alphabetical(self):
        team1 = make_team(1, [("dodrio", ["bodyslam", "drillpeck"])])
        team2 = make_team(1, [("gengar", ["psychic"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        # normal and flying both hit gengar (flying neutral)... make both 0:
        team1 = make_team(1, [("tauros", ["bodyslam", "strength"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        agent = Grunt()
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        assert resolve_choice(state, "p1", choice) == ("move", "bodyslam")

    def test_force_switch_best_type_matchup(self):
        """Versus water: a grass bench mon beats a fire one."""
        team1 = make_team(1, [("tauros", ["bodyslam"]),
                              ("victreebel", ["razorleaf"]),
                              ("moltres", ["fireblast"])])
        team2 = make_team(1, [("starmie", ["surf", "blizzard"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        state.sides[0].active.current_hp = 0
        from battlelab.engine.battle import _check_faint
        _check_faint(state, "p1", [])
        state.phase = "forceswitch"
        agent = Grunt()
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        kind, idx = resolve_choice(state, "p1", choice)
        assert kind == "switch"
        assert state.sides[0].team[idx].spec.species == "victreebel"

    def test_deterministic(self):
        agent = Grunt()
        state = fresh_state()
        legal = legal_actions(state, "p1")
        picks = {agent.choose_action(state, "p1", legal, random.Random(i))
                 for i in range(5)}
        assert len(picks) == 1


class TestGymLeader:
    def make_setup(self, hp_fraction, own=None, opp=None):
        team1 = own or make_team(1, [("snorlax", ["amnesia", "bodyslam",
                                                  "rest", "icebeam"])])
        team2 = opp or make_team(1, [("chansey", ["thunderwave", "icebeam"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        mon = state.sides[0].active
        mon.current_hp = int(mon.max_hp * hp_fraction)
        # opponent reveals a weak move so the safety gate sees a small threat
        state.sides[1].active.revealed_moves.add("icebeam")
        state.sides[1].active.spec.moves = ["icebeam", "thunderwave"]
        return state

    def choice_meaning(self, state, agent):
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(pov_projection(state, "p1"), "p1", legal,
                                     random.Random(0))
        from battlelab.engine import resolve_choice
        return resolve_choice(state, "p1", choice)

    def test_boost_when_very_healthy(self):
        state = self.make_setup(1.0)
        assert self.choice_meaning(state, GymLeader()) == ("move", "amnesia")

    def test_heal_when_unhealthy(self):
        state = self.make_setup(0.2)
        # rest is the only heal here; chansey's threat is small enough
        assert self.choice_meaning(state, GymLeader()) == ("move", "rest")

    def test_midband_equals_grunt(self):
        state = self.make_setup(0.75)
        gym = self.choice_meaning(state, GymLeader())
        grunt = self.choice_meaning(state, Grunt())
        assert gym == grunt

    def test_deterministic(self):
        state = self.make_setup(1.0)
        agent = GymLeader()
        legal = legal_actions(state, "p1")
        picks = {agent.choose_action(state, "p1", legal, random.Random(i))
                 for i in range(5)}
        assert len(picks) == 1


class TestEmeraldKaizo:
    def test_empty_table_uniform_over_max(self):
        agent = EmeraldKaizo(rules=[])
        state = fresh_state()
        legal = legal_actions(state, "p1")
        rng = random.Random(5)
        picks = Counter(agent.choose_action(state, "p1", legal, rng).index
                        for _ in range(3000))
        assert len(picks) == len(legal)  # every legal action reachable

    def test_two_rule_argmax(self):
        """A penalized status move never beats a positive attack."""
        rules = [
            {"when": {"action": "move", "move_class": "damage"}, "score": 2},
            {"when": {"action": "move", "move_class": "status",
                      "opp_has_status": True}, "score": -5},
        ]
        team1 = make_team(1, [("chansey", ["thunderwave", "icebeam"])])
        team2 = make_team(1, [("tauros", ["bodyslam"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        state.sides[1].active.status = "par"
        agent = EmeraldKaizo(rules=rules)
        legal = legal_actions(state, "p1")
        from battlelab.engine import resolve_choice
        for i in range(20):
            choice = agent.choose_action(state, "p1", legal, random.Random(i))
            assert resolve_choice(state, "p1", choice) == ("move", "icebeam")

    def test_deterministic_given_seed(self):
        agent = EmeraldKaizo()
        state = fresh_state()
        legal = legal_actions(state, "p1")
        a = agent.choose_action(state, "p1", legal, random.Random(3))
        b = agent.choose_action(state, "p1", legal, random.Random(3))
        assert a == b

    def test_default_table_loads(self):
        agent = EmeraldKaizo()
        assert agent.rules


class TestSimpleHeuristics:
    def test_favorable_matchup_stays_and_attacks(self):
        team1 = make_team(1, [("jolteon", ["thunderbolt", "bodyslam"]),
                              ("rhydon", ["earthquake"])])
        team2 = make_team(1, [("gyarados", ["surf"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        agent = SimpleHeuristics()
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        assert resolve_choice(state, "p1", choice) == ("move", "thunderbolt")

    def test_unfavorable_matchup_switches(self):
        """A fire mon facing water with an electric benched switches out."""
        team1 = make_team(1, [("moltres", ["fireblast", "agility"]),
                              ("jolteon", ["thunderbolt"])])
        team2 = make_team(1, [("gyarados", ["surf"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        agent = SimpleHeuristics()
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        kind, idx = resolve_choice(state, "p1", choice)
        assert kind == "switch"
        assert state.sides[0].team[idx].spec.species == "jolteon"

    def test_accuracy_weighting(self):
        """Equal-ish damage: the accurate move wins the weighted argmax."""
        team1 = make_team(1, [("lapras", ["blizzard", "icebeam"])])
        team2 = make_team(1, [("dragonite", ["bodyslam"])])
        state, _ = start_battle("gen1ou", team1, team2, seed=1)
        agent = SimpleHeuristics()
        legal = legal_actions(state, "p1")
        choice = agent.choose_action(state, "p1", legal, random.Random(0))
        from battlelab.engine import resolve_choice
        # blizzard 120@90 -> 108 effective, icebeam 95@100 -> 95: blizzard
        assert resolve_choice(state, "p1", choice) == ("move", "blizzard")


class TestHygieneAndLegality:
    def test_projection_strips_unrevealed(self):
        state = fresh_state()
        opp = state.sides[1].active
        opp.spec.item = "leftovers"
        view = pov_projection(state, "p1")
        vopp = view.sides[1].active
        assert vopp.spec.moves == []  # nothing revealed yet
        assert vopp.spec.item is None
        assert vopp.spec.stats is None
        assert len(view.sides[1].team) == 1  # bench hidden

    def test_projection_keeps_revealed(self):
        state = fresh_state()
        opp = state.sides[1].active
        opp.revealed_moves.add("surf")
        view = pov_projection(state, "p1")
        assert view.sides[1].active.spec.moves == ["surf"]

    @pytest.mark.parametrize("name", ["randombaseline", "gen1bossai", "grunt",
                                      "gymleader", "simpleheuristics",
                                      "emeraldkaizo"])
    def test_output_always_legal_fuzz(self, name):
        """Fuzz: across thousands of random states every choice is legal."""
        agent = make_agent(name)
        rnd = random.Random(hash(name) & 0xFFFF)
        checked = 0
        for seed in range(60):
            state = fresh_state(seed=seed)
            guard = 0
            while state.ongoing and guard < 160:
                guard += 1
                picks = {}
                for side in ("p1", "p2"):
                    if not must_act(state, side):
                        continue
                    legal = legal_actions(state, side)
                    choice = agent.choose_action(pov_projection(state, side),
                                                 side, legal, rnd)
                    assert choice in legal
                    checked += 1
                    picks[side] = choice
                step(state, picks.get("p1"), picks.get("p2"))
        assert checked > 500
