"""Parser and serializer for the line-oriented battle log protocol.

Lines look like ``|-damage|p1a: Zapdos|188/383``: fields separated by ``|``
with an empty first field. ``parse_line`` is pure; ``serialize_event`` is
its inverse on the canonical vocabulary, so ``serialize(parse(L)) == L``
for every well-formed line.

Two modes:

* ``lenient`` (default for stored replays): unrecognized message kinds
  become :class:`Raw` events preserved verbatim, so decade-old logs with
  retired messages still parse.
* ``strict`` (for freshly simulated logs): unrecognized kinds raise
  :class:`UnknownMessage`.

Malformed fields of recognized kinds (non-numeric HP, bad slots) are
errors in both modes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Optional

from .events import (
    Ability, Boost, Cant, CureStatus, Damage, Drag, Event, Faint,
    FieldCondition, Format, Heal, HpStatus, Item, MalformedField,
    MissingHeader, Move, Player, PokemonRef, ProtocolEvent, Rated, Raw,
    SetStatus, SideCondition, Switch, TeamSize, Tie, Turn, Unboost,
    UnknownMessage, VolatileEnd, VolatileStart, Weather, Win,
    BOOST_STATS, PLAYER_SIDES, PLAYER_SLOTS, STATUS_CODES, TERMINAL_EVENTS,
)

CHAT_TAGS = ("c", "c:", "chat")
_RANK_CHARS = "~&#@%+*☆★"  # ladder rank prefixes seen in chat lines


def _ref(text: str) -> PokemonRef:
    slot, sep, name = text.partition(":")
    slot = slot.strip()
    if slot not in PLAYER_SLOTS:
        raise MalformedField(f"bad pokemon slot {text!r} (singles only)")
    if not sep:
        raise MalformedField(f"pokemon reference {text!r} missing name")
    return PokemonRef(slot=slot, name=name.strip())


def _side_ref(text: str) -> tuple[str, str]:
    side, sep, label = text.partition(":")
    side = side.strip()
    if side not in PLAYER_SIDES:
        raise MalformedField(f"bad side {text!r}")
    return side, label.strip()


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise MalformedField(f"non-numeric {what}: {text!r}") from None


def _hp(text: str) -> HpStatus:
    text = text.strip()
    if not text:
        raise MalformedField("empty hp field")
    parts = text.split(" ")
    frac = parts[0]
    status = None
    if len(parts) == 2:
        status = parts[1]
        if status not in STATUS_CODES:
            raise MalformedField(f"unknown status suffix {status!r}")
    elif len(parts) > 2:
        raise MalformedField(f"bad hp field {text!r}")
    num_text, sep, den_text = frac.partition("/")
    if not sep:
        raise MalformedField(f"hp missing denominator: {text!r}")
    current = _int(num_text, "hp numerator")
    maximum = _int(den_text, "hp denominator")
    if maximum <= 0:
        raise MalformedField(f"hp denominator must be positive: {text!r}")
    if not 0 <= current <= maximum:
        raise MalformedField(f"hp out of range: {text!r}")
    return HpStatus(current=current, max=maximum, status=status)


def _details(text: str) -> tuple[str, int, Optional[str]]:
    """Split ``Tauros, L85, M`` details into (species, level, gender)."""
    parts = [p.strip() for p in text.split(",")]
    species = parts[0]
    if not species:
        raise MalformedField("empty species in details")
    level = 100
    gender = None
    for extra in parts[1:]:
        if extra.startswith("L"):
            level = _int(extra[1:], "level")
            if not 1 <= level <= 100:
                raise MalformedField(f"level out of range: {extra!r}")
        elif extra in ("M", "F"):
            gender = extra
        elif extra:
            raise MalformedField(f"unsupported details token {extra!r}")
    return species, level, gender


def _split_bracket_tags(fields: list[str]) -> tuple[list[str], dict[str, str]]:
    """Separate trailing ``[from] x`` / ``[of] y`` / ``[upkeep]`` tags."""
    plain: list[str] = []
    tags: dict[str, str] = {}
    for f in fields:
        if f.startswith("["):
            key, _, value = f.partition("]")
            tags[key[1:]] = value.strip()
        else:
            plain.append(f)
    return plain, tags


def _need(fields: list[str], n: int, tag: str) -> list[str]:
    if len(fields) < n:
        raise MalformedField(f"|{tag}| needs {n} field(s), got {len(fields)}")
    return fields


def _parse_switchlike(cls, fields: list[str], tag: str):
    _need(fields, 3, tag)
    species, level, gender = _details(fields[1])
    return cls(pokemon=_ref(fields[0]), species=species, level=level,
               hp=_hp(fields[2]), gender=gender)


def _parse_player(fields: list[str]) -> Player:
    _need(fields, 2, "player")
    side = fields[0]
    if side not in PLAYER_SIDES:
        raise MalformedField(f"bad player side {side!r}")
    avatar = fields[2] if len(fields) > 2 and fields[2] else None
    rating = _int(fields[3], "player rating") if len(fields) > 3 and fields[3] else None
    return Player(side=side, name=fields[1], avatar=avatar, rating=rating)


def _parse_damage_heal(cls, fields: list[str], tag: str):
    plain, tags = _split_bracket_tags(fields)
    _need(plain, 2, tag)
    kwargs = {"pokemon": _ref(plain[0]), "hp": _hp(plain[1]),
              "from_source": tags.get("from")}
    if cls is Damage:
        kwargs["of"] = _ref(tags["of"]) if "of" in tags else None
    return cls(**kwargs)


def _parse_boost(cls, fields: list[str], tag: str):
    _need(fields, 3, tag)
    stat = fields[1]
    if stat not in BOOST_STATS:
        raise MalformedField(f"unknown boost stat {stat!r}")
    amount = _int(fields[2], "boost amount")
    if amount < 0:
        raise MalformedField("boost amount must be nonnegative")
    return cls(pokemon=_ref(fields[0]), stat=stat, amount=amount)


def _parse_status(cls, fields: list[str], tag: str):
    _need(fields, 2, tag)
    status = fields[1]
    if status not in STATUS_CODES or status == "fnt":
        raise MalformedField(f"unknown status code {status!r}")
    return cls(pokemon=_ref(fields[0]), status=status)


def _parse_side(fields: list[str], tag: str, ended: bool) -> SideCondition:
    _need(fields, 2, tag)
    side, label = _side_ref(fields[0])
    return SideCondition(side=side, side_label=label, condition=fields[1], ended=ended)


def _parse_weather(fields: list[str]) -> Weather:
    plain, tags = _split_bracket_tags(fields)
    _need(plain, 1, "-weather")
    return Weather(condition=plain[0], upkeep="upkeep" in tags)


_PARSERS: dict[str, Callable[[list[str]], Event]] = {
    "format": lambda f: Format(format_id=_need(f, 1, "format")[0]),
    "player": _parse_player,
    "teamsize": lambda f: TeamSize(side=_need(f, 2, "teamsize")[0],
                                   size=_int(f[1], "team size")),
    "rated": lambda f: Rated(message=f[0] if f else None),
    "turn": lambda f: Turn(number=_int(_need(f, 1, "turn")[0], "turn number")),
    "move": lambda f: Move(pokemon=_ref(_need(f, 2, "move")[0]), move=f[1],
                           target=_ref(f[2]) if len(f) > 2 and f[2] else None),
    "switch": lambda f: _parse_switchlike(Switch, f, "switch"),
    "drag": lambda f: _parse_switchlike(Drag, f, "drag"),
    "-damage": lambda f: _parse_damage_heal(Damage, f, "-damage"),
    "-heal": lambda f: _parse_damage_heal(Heal, f, "-heal"),
    "-status": lambda f: _parse_status(SetStatus, f, "-status"),
    "-curestatus": lambda f: _parse_status(CureStatus, f, "-curestatus"),
    "-boost": lambda f: _parse_boost(Boost, f, "-boost"),
    "-unboost": lambda f: _parse_boost(Unboost, f, "-unboost"),
    "faint": lambda f: Faint(pokemon=_ref(_need(f, 1, "faint")[0])),
    "-weather": _parse_weather,
    "-sidestart": lambda f: _parse_side(f, "-sidestart", ended=False),
    "-sideend": lambda f: _parse_side(f, "-sideend", ended=True),
    "-fieldstart": lambda f: FieldCondition(condition=_need(f, 1, "-fieldstart")[0]),
    "-fieldend": lambda f: FieldCondition(condition=_need(f, 1, "-fieldend")[0], ended=True),
    "-item": lambda f: Item(pokemon=_ref(_need(f, 2, "-item")[0]), item=f[1]),
    "-ability": lambda f: Ability(pokemon=_ref(_need(f, 2, "-ability")[0]), ability=f[1]),
    "cant": lambda f: Cant(pokemon=_ref(_need(f, 2, "cant")[0]), reason=f[1],
                           move=f[2] if len(f) > 2 and f[2] else None),
    "-start": lambda f: VolatileStart(pokemon=_ref(_need(f, 2, "-start")[0]), condition=f[1]),
    "-end": lambda f: VolatileEnd(pokemon=_ref(_need(f, 2, "-end")[0]), condition=f[1]),
    "win": lambda f: Win(winner=_need(f, 1, "win")[0]),
    "tie": lambda f: Tie(),
}


def parse_line(line: str, mode: str = "lenient") -> ProtocolEvent:
    """Parse one log line (no trailing newline) into a typed event."""
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown parse mode {mode!r}")
    if line == "":
        raise MalformedField("empty line")
    if not line.startswith("|"):
        if mode == "strict":
            raise UnknownMessage(f"line does not start with '|': {line!r}")
        return Raw(text=line, source_line=line)
    fields = line.split("|")
    tag = fields[1]
    parser = _PARSERS.get(tag)
    if parser is None:
        if mode == "strict":
            raise UnknownMessage(f"unknown message kind {tag!r}")
        return Raw(text=line, source_line=line)
    event = parser(fields[2:])
    event.source_line = line
    return event


def serialize_event(event: ProtocolEvent) -> str:
    """Render an event back to its canonical wire line.

    ``parse_line(serialize_event(e))`` is structurally equal to ``e``;
    Raw events reproduce their original text exactly.
    """
    if isinstance(event, Raw):
        return event.text
    if isinstance(event, Format):
        return f"|format|{event.format_id}"
    if isinstance(event, Player):
        parts = ["", "player", event.side, event.name]
        if event.avatar is not None or event.rating is not None:
            parts.append(event.avatar or "")
        if event.rating is not None:
            parts.append(str(event.rating))
        return "|".join(parts)
    if isinstance(event, TeamSize):
        return f"|teamsize|{event.side}|{event.size}"
    if isinstance(event, Rated):
        return f"|rated|{event.message}" if event.message else "|rated"
    if isinstance(event, Turn):
        return f"|turn|{event.number}"
    if isinstance(event, Move):
        line = f"|move|{event.pokemon}|{event.move}"
        if event.target is not None:
            line += f"|{event.target}"
        return line
    if isinstance(event, (Switch, Drag)):
        tag = "switch" if isinstance(event, Switch) else "drag"
        details = event.species
        if event.level != 100:
            details += f", L{event.level}"
        gender = getattr(event, "gender", None)
        if gender:
            details += f", {gender}"
        return f"|{tag}|{event.pokemon}|{details}|{event.hp}"
    if isinstance(event, (Damage, Heal)):
        tag = "-damage" if isinstance(event, Damage) else "-heal"
        line = f"|{tag}|{event.pokemon}|{event.hp}"
        if event.from_source:
            line += f"|[from] {event.from_source}"
        if isinstance(event, Damage) and event.of is not None:
            line += f"|[of] {event.of}"
        return line
    if isinstance(event, SetStatus):
        return f"|-status|{event.pokemon}|{event.status}"
    if isinstance(event, CureStatus):
        return f"|-curestatus|{event.pokemon}|{event.status}"
    if isinstance(event, Boost):
        return f"|-boost|{event.pokemon}|{event.stat}|{event.amount}"
    if isinstance(event, Unboost):
        return f"|-unboost|{event.pokemon}|{event.stat}|{event.amount}"
    if isinstance(event, Faint):
        return f"|faint|{event.pokemon}"
    if isinstance(event, Weather):
        line = f"|-weather|{event.condition}"
        if event.upkeep:
            line += "|[upkeep]"
        return line
    if isinstance(event, SideCondition):
        tag = "-sideend" if event.ended else "-sidestart"
        return f"|{tag}|{event.side}: {event.side_label}|{event.condition}"
    if isinstance(event, FieldCondition):
        tag = "-fieldend" if event.ended else "-fieldstart"
        return f"|{tag}|{event.condition}"
    if isinstance(event, Item):
        return f"|-item|{event.pokemon}|{event.item}"
    if isinstance(event, Ability):
        return f"|-ability|{event.pokemon}|{event.ability}"
    if isinstance(event, Cant):
        line = f"|cant|{event.pokemon}|{event.reason}"
        if event.move:
            line += f"|{event.move}"
        return line
    if isinstance(event, VolatileStart):
        return f"|-start|{event.pokemon}|{event.condition}"
    if isinstance(event, VolatileEnd):
        return f"|-end|{event.pokemon}|{event.condition}"
    if isinstance(event, Win):
        return f"|win|{event.winner}"
    if isinstance(event, Tie):
        return "|tie"
    raise TypeError(f"cannot serialize {type(event).__name__}")


@dataclass
class ReplayDocument:
    """A parsed replay: header metadata plus the ordered event stream."""

    format_id: str
    players: tuple[str, str]
    events: list[ProtocolEvent] = dc_field(default_factory=list)
    rating: Optional[int] = None
    upload_time: Optional[int] = None

    def player_name(self, side: str) -> str:
        return self.players[0] if side == "p1" else self.players[1]


def _pseudonym(name: str) -> str:
    return "anon-" + hashlib.blake2b(name.encode("utf-8"), digest_size=4).hexdigest()


def _anonymize_events(events: list[ProtocolEvent], names: dict[str, str]) -> None:
    for ev in events:
        if isinstance(ev, Player) and ev.name in names:
            ev.name = names[ev.name]
        elif isinstance(ev, Win) and ev.winner in names:
            ev.winner = names[ev.winner]
        elif isinstance(ev, SideCondition) and ev.side_label in names:
            ev.side_label = names[ev.side_label]
        elif isinstance(ev, Raw):
            parts = ev.text.split("|")
            if len(parts) > 2 and parts[1] in CHAT_TAGS:
                # replace the speaker (optionally rank-prefixed) and any
                # verbatim mentions in the body
                speaker = parts[2].lstrip(_RANK_CHARS)
                if speaker in names:
                    parts[2] = parts[2][: len(parts[2]) - len(speaker)] + names[speaker]
                for i in range(3, len(parts)):
                    for real, fake in names.items():
                        parts[i] = parts[i].replace(real, fake)
                ev.text = "|".join(parts)
        if ev.source_line is not None:
            ev.source_line = None  # original text would leak real names


def parse_replay(raw: str, mode: str = "lenient", anonymize: bool = False) -> ReplayDocument:
    """Parse a complete replay file into a :class:`ReplayDocument`.

    Blank lines are skipped. Structural checks: the header block (format
    and both players) must precede the first turn, and at most one
    terminal event (win/tie) may appear, as the final event.
    """
    events: list[ProtocolEvent] = []
    for number, line in enumerate(raw.splitlines(), start=1):
        if line.strip() == "":
            continue
        try:
            events.append(parse_line(line, mode=mode))
        except (UnknownMessage, MalformedField) as err:
            raise type(err)(str(err), line_number=number) from None

    format_id = None
    names: dict[str, str] = {}
    saw_turn = False
    terminal_index = None
    rating = None
    upload_time = None
    for idx, ev in enumerate(events):
        if isinstance(ev, Turn):
            saw_turn = True
        elif isinstance(ev, Format):
            if not saw_turn and format_id is None:
                format_id = ev.format_id
        elif isinstance(ev, Player):
            if ev.name:
                names.setdefault(ev.side, ev.name)
            if ev.rating is not None:
                rating = max(rating or 0, ev.rating)
        elif isinstance(ev, TERMINAL_EVENTS):
            if terminal_index is not None:
                raise MalformedField("duplicate terminal event")
            terminal_index = idx
        elif isinstance(ev, Raw) and ev.tag == "t:" and upload_time is None:
            parts = ev.text.split("|")
            if len(parts) > 2 and parts[2].isdigit():
                upload_time = int(parts[2])

    if format_id is None:
        raise MissingHeader("no format header before first turn")
    if "p1" not in names or "p2" not in names:
        raise MissingHeader("missing player header(s)")
    if terminal_index is not None and terminal_index != len(events) - 1:
        raise MalformedField("terminal event is not the last event")

    players = (names["p1"], names["p2"])
    if anonymize:
        mapping = {real: _pseudonym(real) for real in players}
        _anonymize_events(events, mapping)
        players = (mapping[players[0]], mapping[players[1]])

    return ReplayDocument(format_id=format_id, players=players, events=events,
                          rating=rating, upload_time=upload_time)


def serialize_replay(events: Iterable[ProtocolEvent]) -> str:
    """Render an event stream to replay text, one line per event."""
    return "\n".join(serialize_event(ev) for ev in events) + "\n"
