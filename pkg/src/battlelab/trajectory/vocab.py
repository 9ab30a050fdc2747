"""Token vocabulary: a stable bijection between observation token strings
and integer ids, with reserved ``<pad>`` and ``<unknown>`` entries."""

from __future__ import annotations

import hashlib
from functools import lru_cache
from typing import Iterable

PAD = "<pad>"
UNKNOWN = "<unknown>"
RESERVED = (PAD, UNKNOWN)


class Vocabulary:
    def __init__(self, tokens: list[str]):
        if tuple(tokens[:2]) != RESERVED:
            raise ValueError("vocabulary must start with the reserved tokens")
        if len(set(tokens)) != len(tokens):
            raise ValueError("vocabulary tokens must be unique")
        self._tokens = list(tokens)
        self._ids = {t: i for i, t in enumerate(tokens)}

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Vocabulary":
        """Build from a scan: reserved ids first, then sorted unique tokens."""
        body = sorted(set(tokens) - set(RESERVED))
        return cls(list(RESERVED) + body)

    @property
    def pad_id(self) -> int:
        return 0

    @property
    def unknown_id(self) -> int:
        return 1

    def to_id(self, token: str) -> int:
        return self._ids.get(token, 1)

    def to_token(self, token_id: int) -> str:
        return self._tokens[token_id]

    def tokens(self) -> list[str]:
        return list(self._tokens)

    def fingerprint(self) -> str:
        payload = "\n".join(self._tokens).encode("utf-8")
        return hashlib.blake2b(payload, digest_size=8).hexdigest()

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._tokens == other._tokens


@lru_cache(maxsize=1)
def default_vocabulary() -> Vocabulary:
    """The standard vocabulary enumerated from the bundled data tables.

    The observation token space is closed over the tables (species, moves,
    statuses, conditions, and the last-turn summary composites), so this
    covers everything the encoder can emit for supported formats. Rebuild
    with :meth:`Vocabulary.from_tokens` for datasets that outgrow it.
    """
    from ..engine import get_gen
    tokens: set[str] = set()
    tokens.update(f"gen{g}ou" for g in range(1, 5))
    tokens.update(("move", "forceswitch"))
    statuses = ("brn", "par", "psn", "tox", "slp", "frz")
    tokens.update(statuses)
    tokens.update(("none", "sandstorm", "raindance", "sunnyday"))
    tokens.update(("reflect", "lightscreen", "spikes"))
    tokens.update(("confusion",))
    tokens.update(("leftovers", "lumberry", "miracleberry"))
    kinds: set[str] = set()
    for g in range(1, 5):
        data = get_gen(g)
        for sid, species in data.species.items():
            tokens.add(sid)
            tokens.update(species.types)
            tokens.update(species.abilities)
            kinds.add(f"switch/{sid}")
        for mid in data.moves:
            tokens.add(mid)
            kinds.add(f"move/{mid}")
    tokens.add("struggle")
    kinds.add("move/struggle")
    kinds.update(("damage", "heal", "faint"))
    kinds.update(f"status/{s}" for s in statuses)
    kinds.update(f"cure/{s}" for s in statuses)
    for stat in ("atk", "def", "spa", "spd", "spe", "accuracy", "evasion"):
        kinds.add(f"boost/{stat}")
        kinds.add(f"unboost/{stat}")
    kinds.update(f"cant/{r}" for r in ("slp", "par", "frz", "flinch"))
    for cond in ("reflect", "lightscreen", "spikes"):
        kinds.add(f"side/{cond}")
        kinds.add(f"side/{cond}/end")
    kinds.update(("volatile/confusion", "volatile/confusion/end"))
    kinds.update(("item/leftovers", "item/lumberry", "item/miracleberry"))
    for g in range(1, 5):
        for ab in ("intimidate", "sandstream", "naturalcure", "waterabsorb"):
            kinds.add(f"ability/{ab}")
    for kind in kinds:
        tokens.add(f"last/own/{kind}")
        tokens.add(f"last/opp/{kind}")
    for w in ("sandstorm", "raindance", "sunnyday", "none"):
        tokens.add(f"last/weather/{w}")
    return Vocabulary.from_tokens(tokens)
