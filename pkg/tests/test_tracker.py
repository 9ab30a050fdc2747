"""Spectator tracker: event application, reveals, consistency checks, and
forward/track duality."""

import pytest

from battlelab.engine import (
    InconsistentEvent, ReplayTracker, UnsupportedMechanic,
)
from battlelab.protocol import parse_line

from conftest import run_random_battle


def tracker():
    t = ReplayTracker("gen1ou", ("Alice", "Bob"))
    t.apply(parse_line("|switch|p1a: Tauros|Tauros|353/353"))
    t.apply(parse_line("|switch|p2a: Starmie|Starmie|323/323"))
    return t


class TestApplyEvent:
    def test_switch_reveals_species(self):
        t = tracker()
        side = t.state.sides[1]
        assert side.active.spec.species == "starmie"
        assert side.active.species_revealed
        assert side.active.spec.types == ("water", "psychic")

    def test_damage_sets_ratio(self):
        t = tracker()
        t.apply(parse_line("|-damage|p1a: Tauros|188/383"))
        assert t.state.sides[0].active.hp_fraction == 188 / 383

    def test_heal_on_fainted_is_inconsistent(self):
        t = tracker()
        t.apply(parse_line("|turn|1"))
        t.apply(parse_line("|-damage|p2a: Starmie|0/323"))
        t.apply(parse_line("|faint|p2a: Starmie"))
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|-heal|p2a: Starmie|100/323"))

    def test_damage_to_unknown_nickname_is_inconsistent(self):
        t = tracker()
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|-damage|p1a: Gengar|10/100"))

    def test_damage_raising_hp_is_inconsistent(self):
        t = tracker()
        t.apply(parse_line("|-damage|p1a: Tauros|100/383"))
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|-damage|p1a: Tauros|200/383"))

    def test_move_reveals_and_tracks_pp(self):
        t = tracker()
        t.apply(parse_line("|move|p2a: Starmie|Recover|p2a: Starmie"))
        mon = t.state.sides[1].active
        assert mon.spec.moves == ["recover"]
        assert mon.pp["recover"] == 31

    def test_fifth_move_is_inconsistent(self):
        t = tracker()
        for mv in ("Recover", "Surf", "Blizzard", "Psychic"):
            t.apply(parse_line(f"|move|p2a: Starmie|{mv}"))
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|move|p2a: Starmie|Thunderbolt"))

    def test_unknown_move_is_unsupported(self):
        t = tracker()
        with pytest.raises(UnsupportedMechanic):
            t.apply(parse_line("|move|p2a: Starmie|Hidden Power"))

    def test_unknown_species_is_unsupported(self):
        t = tracker()
        with pytest.raises(UnsupportedMechanic):
            t.apply(parse_line("|switch|p2a: X|Missingno|100/100"))

    def test_seventh_pokemon_is_inconsistent(self):
        t = ReplayTracker("gen1ou", ("A", "B"))
        species = ["Tauros", "Snorlax", "Chansey", "Starmie", "Exeggutor",
                   "Alakazam", "Rhydon"]
        for i, sp in enumerate(species[:6]):
            t.apply(parse_line(f"|switch|p1a: {sp}|{sp}|100/100"))
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|switch|p1a: Rhydon|Rhydon|100/100"))

    def test_item_and_ability_reveal(self):
        t = ReplayTracker("gen3ou", ("A", "B"))
        t.apply(parse_line("|switch|p1a: Blissey|Blissey|714/714"))
        t.apply(parse_line("|-item|p1a: Blissey|Leftovers"))
        t.apply(parse_line("|-ability|p1a: Blissey|Natural Cure"))
        mon = t.state.sides[0].active
        assert mon.item == "leftovers" and mon.item_revealed
        assert mon.spec.ability == "naturalcure" and mon.ability_revealed

    def test_heal_from_item_reveals(self):
        t = ReplayTracker("gen2ou", ("A", "B"))
        t.apply(parse_line("|switch|p1a: Snorlax|Snorlax|523/523"))
        t.apply(parse_line("|-damage|p1a: Snorlax|400/523"))
        t.apply(parse_line("|-heal|p1a: Snorlax|432/523|[from] item: Leftovers"))
        assert t.state.sides[0].active.item == "leftovers"

    def test_cosmetic_raw_allowed_state_changing_rejected(self):
        t = tracker()
        t.apply(parse_line("|-crit|p2a: Starmie"))  # cosmetic: fine
        t.apply(parse_line("|c|alice|nice one"))  # chat: fine
        with pytest.raises(UnsupportedMechanic):
            t.apply(parse_line("|-transform|p2a: Starmie|p1a: Tauros"))

    def test_field_condition_unsupported(self):
        t = tracker()
        with pytest.raises(UnsupportedMechanic):
            t.apply(parse_line("|-fieldstart|Trick Room"))

    def test_turn_must_increase_by_one(self):
        t = tracker()
        t.apply(parse_line("|turn|1"))
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|turn|3"))

    def test_win_by_unknown_player_inconsistent(self):
        t = tracker()
        with pytest.raises(InconsistentEvent):
            t.apply(parse_line("|win|Mallory"))

    def test_nickname_mapping(self):
        t = ReplayTracker("gen1ou", ("A", "B"))
        t.apply(parse_line("|switch|p1a: Bessie|Tauros|353/353"))
        t.apply(parse_line("|-damage|p1a: Bessie|100/353"))
        assert t.state.sides[0].active.spec.species == "tauros"
        assert t.state.sides[0].active.current_hp == 100

    def test_boosts_clamped(self):
        t = tracker()
        for _ in range(5):
            t.apply(parse_line("|-boost|p1a: Tauros|atk|2"))
        assert t.state.sides[0].active.boosts["atk"] == 6


class TestDuality:
    """The public projection of a simulated battle is reproduced by feeding
    its own event stream through a fresh tracker."""

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_projection_matches(self, gen1_team_a, gen1_team_b, seed):
        state, events, _ = run_random_battle("gen1ou", gen1_team_a,
                                             gen1_team_b, seed)
        t = ReplayTracker("gen1ou", ("Alice", "Bob"))
        for ev in events:
            t.apply(ev)
        assert t.state.outcome == state.outcome
        assert t.state.turn == state.turn
        for si in (0, 1):
            sim_side = state.sides[si]
            trk_side = t.state.sides[si]
            sim_active = sim_side.active.spec.species if sim_side.active else None
            trk_active = trk_side.active.spec.species if trk_side.active else None
            assert sim_active == trk_active
            for mon in sim_side.team:
                if not mon.species_revealed:
                    continue
                ti = trk_side.find(mon.spec.species)
                assert ti is not None
                tracked = trk_side.team[ti]
                assert tracked.hp_fraction == pytest.approx(mon.hp_fraction,
                                                            abs=1e-12)
                assert tracked.status == mon.status
                assert tracked.boosts == mon.boosts
                assert tracked.revealed_moves == set(tracked.spec.moves)
                assert tracked.revealed_moves <= set(mon.spec.moves)

    def test_gen3_duality_with_conditions(self):
        from conftest import make_team
        team1 = make_team(3, [("tyranitar", ["rockslide", "crunch"]),
                              ("skarmory", ["spikes", "drillpeck"])])
        team2 = make_team(3, [("swampert", ["earthquake", "icebeam"]),
                              ("blissey", ["softboiled", "toxic"])])
        state, events, _ = run_random_battle("gen3ou", team1, team2, seed=9)
        t = ReplayTracker("gen3ou", ("Alice", "Bob"))
        for ev in events:
            t.apply(ev)
        assert t.state.weather == state.weather
        for si in (0, 1):
            assert set(t.state.sides[si].conditions) == \
                set(state.sides[si].conditions)
