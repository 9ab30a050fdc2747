"""Protocol parsing, serialization, and replay document structure."""

import pytest
from hypothesis import given, strategies as st

from battlelab.protocol import (
    Cant, Damage, Faint, HpStatus, MalformedField, MissingHeader, Move,
    Player, PokemonRef, Raw, SetStatus, SideCondition, Switch, Tie, Turn,
    UnknownMessage, Weather, Win, parse_line, parse_replay, serialize_event,
    serialize_replay,
)


class TestParseLine:
    def test_turn(self):
        assert parse_line("|turn|5") == Turn(number=5)

    def test_faint(self):
        ev = parse_line("|faint|p2a: Gengar")
        assert ev == Faint(pokemon=PokemonRef("p2a", "Gengar"))

    def test_empty_line_is_malformed(self):
        with pytest.raises(MalformedField):
            parse_line("")

    def test_damage_with_status_suffix(self):
        ev = parse_line("|-damage|p1a: Zapdos|188/383 par")
        assert ev.hp == HpStatus(188, 383, "par")

    def test_damage_with_from_tag(self):
        ev = parse_line("|-damage|p1a: Zapdos|100/383|[from] brn")
        assert ev.from_source == "brn"

    def test_switch_details(self):
        ev = parse_line("|switch|p1a: Sparky|Zapdos, L85|300/300")
        assert (ev.species, ev.level, ev.pokemon.name) == ("Zapdos", 85, "Sparky")

    def test_non_numeric_hp_is_malformed(self):
        with pytest.raises(MalformedField):
            parse_line("|-damage|p1a: Zapdos|x/383")

    def test_hp_above_max_is_malformed(self):
        with pytest.raises(MalformedField):
            parse_line("|-damage|p1a: Zapdos|400/383")

    def test_doubles_slots_rejected(self):
        with pytest.raises(MalformedField):
            parse_line("|move|p1b: Zapdos|Thunderbolt")

    def test_unknown_kind_lenient_is_raw(self):
        ev = parse_line("|c|alice|hello there", mode="lenient")
        assert isinstance(ev, Raw)
        assert ev.text == "|c|alice|hello there"

    def test_unknown_kind_strict_raises(self):
        with pytest.raises(UnknownMessage):
            parse_line("|c|alice|hello there", mode="strict")

    def test_cant_with_reason(self):
        ev = parse_line("|cant|p1a: Jynx|slp")
        assert ev == Cant(pokemon=PokemonRef("p1a", "Jynx"), reason="slp")

    def test_weather_upkeep(self):
        ev = parse_line("|-weather|Sandstorm|[upkeep]")
        assert ev == Weather(condition="Sandstorm", upkeep=True)

    def test_sidestart(self):
        ev = parse_line("|-sidestart|p2: Bob|Spikes")
        assert ev == SideCondition(side="p2", side_label="Bob",
                                   condition="Spikes")


class TestSerialize:
    def test_turn_inverse(self):
        assert serialize_event(Turn(number=5)) == "|turn|5"

    def test_damage(self):
        ev = Damage(pokemon=PokemonRef("p1a", "Zapdos"), hp=HpStatus(188, 383))
        assert serialize_event(ev) == "|-damage|p1a: Zapdos|188/383"

    def test_raw_identity(self):
        assert serialize_event(Raw(text="|c|user|hello")) == "|c|user|hello"

    def test_move_with_target(self):
        ev = Move(pokemon=PokemonRef("p1a", "Tauros"), move="Body Slam",
                  target=PokemonRef("p2a", "Starmie"))
        assert serialize_event(ev) == "|move|p1a: Tauros|Body Slam|p2a: Starmie"

    @pytest.mark.parametrize("line", [
        "|format|gen1ou",
        "|player|p1|Alice",
        "|player|p2|Bob|2|1422",
        "|teamsize|p1|6",
        "|rated",
        "|turn|12",
        "|move|p1a: Tauros|Body Slam|p2a: Starmie",
        "|switch|p1a: Tauros|Tauros|353/353",
        "|switch|p2a: Lax|Snorlax, L91|430/521 par",
        "|drag|p2a: Rhydon|Rhydon|413/413",
        "|-damage|p2a: Starmie|188/323",
        "|-damage|p1a: Zapdos|100/383 brn|[from] brn",
        "|-heal|p1a: Chansey|703/703|[from] item: Leftovers",
        "|-status|p2a: Starmie|par",
        "|-curestatus|p2a: Starmie|par",
        "|-boost|p1a: Snorlax|atk|2",
        "|-unboost|p2a: Gengar|spe|1",
        "|faint|p2a: Gengar",
        "|-weather|Sandstorm",
        "|-weather|none",
        "|-sidestart|p1: Alice|Reflect",
        "|-sideend|p1: Alice|Reflect",
        "|-fieldstart|Trick Room",
        "|-item|p2a: Snorlax|Leftovers",
        "|-ability|p2a: Salamence|Intimidate",
        "|cant|p1a: Jynx|slp",
        "|-start|p1a: Gengar|confusion",
        "|-end|p1a: Gengar|confusion",
        "|win|Alice",
        "|tie",
    ])
    def test_round_trip_bit_exact(self, line):
        assert serialize_event(parse_line(line, mode="strict")) == line

    def test_reparse_structural_equality(self):
        ev = Damage(pokemon=PokemonRef("p1a", "Zapdos"),
                    hp=HpStatus(188, 383, "par"), from_source="brn")
        assert parse_line(serialize_event(ev)) == ev


@given(st.integers(min_value=1, max_value=9999))
def test_turn_round_trip_property(n):
    line = f"|turn|{n}"
    assert serialize_event(parse_line(line)) == line


@given(num=st.integers(min_value=0, max_value=999),
       den=st.integers(min_value=1, max_value=999),
       slot=st.sampled_from(["p1a", "p2a"]),
       status=st.sampled_from([None, "par", "brn", "slp"]))
def test_damage_round_trip_property(num, den, slot, status):
    if num > den:
        num, den = den, num
    hp = f"{num}/{den}" + (f" {status}" if status else "")
    line = f"|-damage|{slot}: Mon|{hp}"
    assert serialize_event(parse_line(line, mode="strict")) == line


FIXTURE = """|format|gen1ou
|player|p1|Alice
|player|p2|Bob
|teamsize|p1|3
|teamsize|p2|3
|switch|p1a: Tauros|Tauros|353/353
|switch|p2a: Starmie|Starmie|323/323
|turn|1
|move|p1a: Tauros|Body Slam|p2a: Starmie
|-damage|p2a: Starmie|200/323
|move|p2a: Starmie|Thunder Wave|p1a: Tauros
|-status|p1a: Tauros|par
|turn|2
|move|p1a: Tauros|Body Slam|p2a: Starmie
|-damage|p2a: Starmie|60/323
|win|Alice
"""


class TestParseReplay:
    def test_header_and_events(self):
        doc = parse_replay(FIXTURE)
        assert doc.format_id == "gen1ou"
        assert doc.players == ("Alice", "Bob")
        assert isinstance(doc.events[-1], Win)

    def test_missing_header(self):
        with pytest.raises(MissingHeader):
            parse_replay("|turn|1\n|win|Alice\n")

    def test_duplicate_terminal(self):
        with pytest.raises(MalformedField):
            parse_replay(FIXTURE + "|win|Alice\n")

    def test_terminal_not_last(self):
        bad = FIXTURE.replace("|win|Alice\n", "|win|Alice\n|turn|3\n")
        with pytest.raises(MalformedField):
            parse_replay(bad)

    def test_line_numbers_in_errors(self):
        bad = FIXTURE.replace("|turn|2", "|-damage|p2a: Starmie|nope")
        with pytest.raises(MalformedField, match="line 13"):
            parse_replay(bad)

    def test_anonymize_replaces_names(self):
        doc = parse_replay(FIXTURE, anonymize=True)
        assert "Alice" not in doc.players[0]
        assert doc.events[-1].winner == doc.players[0]
        again = parse_replay(FIXTURE, anonymize=True)
        assert again.players == doc.players  # stable pseudonyms

    def test_anonymize_chat(self):
        text = FIXTURE.replace("|turn|2\n", "|turn|2\n|c|☆Alice|hi Bob\n")
        doc = parse_replay(text, anonymize=True)
        chats = [e for e in doc.events if isinstance(e, Raw)]
        assert chats and "Alice" not in chats[0].text
        assert "Bob" not in chats[0].text

    def test_serialize_replay_round_trip(self):
        doc = parse_replay(FIXTURE)
        assert serialize_replay(doc.events) == FIXTURE

    def test_tie_terminal(self):
        text = FIXTURE.replace("|win|Alice\n", "|tie\n")
        doc = parse_replay(text)
        assert isinstance(doc.events[-1], Tie)

    def test_rating_from_player_header(self):
        text = FIXTURE.replace("|player|p2|Bob", "|player|p2|Bob|1|1422")
        assert parse_replay(text).rating == 1422
