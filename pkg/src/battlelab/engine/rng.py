"""Counter-based battle RNG.

Every draw is a pure function of (battle seed, turn, substep, ordinal), so
a turn replays identically regardless of when or where it is evaluated.
"""

from __future__ import annotations

import hashlib
import struct

_MAX = float(1 << 64)


class BattleRng:
    def __init__(self, seed: int):
        self._key = (seed & (2**64 - 1)).to_bytes(8, "little")
        self._turn = 0
        self._substep = 0
        self._ordinal = 0

    def begin(self, turn: int, substep: int) -> None:
        self._turn = turn
        self._substep = substep
        self._ordinal = 0

    def _next_u64(self) -> int:
        payload = struct.pack("<IHI", self._turn & 0xFFFFFFFF,
                              self._substep & 0xFFFF, self._ordinal)
        self._ordinal += 1
        digest = hashlib.blake2b(payload, key=self._key, digest_size=8).digest()
        return int.from_bytes(digest, "little")

    def uniform(self) -> float:
        return self._next_u64() / _MAX

    def chance(self, p: float) -> bool:
        if p <= 0:
            return False
        if p >= 1:
            return True
        return self.uniform() < p

    def randint(self, lo: int, hi: int) -> int:
        """Inclusive integer draw."""
        return lo + self._next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self._next_u64() % len(seq)]
