"""Hidden-team inference: reveal bookkeeping, usage priors, completion."""

from .finalize import SetLibrary, finalize
from .partial import ContradictoryReveal, PartialTeam, SlotKnowledge
from .usage import EmptyStats, FormatStats, StatsError, UsageStats

__all__ = [
    "ContradictoryReveal", "EmptyStats", "FormatStats", "PartialTeam",
    "SetLibrary", "SlotKnowledge", "StatsError", "UsageStats", "finalize",
]
