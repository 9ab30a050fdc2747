"""POV trajectories: observation encoding, rewards, reconstruction, file IO."""

from .datasetio import (
    CorruptRecord, SchemaMismatch, SCHEMA_VERSION, iter_dataset, read_dataset,
    read_header, write_dataset,
)
from .observation import (
    ACTIONS, MASKED, NUMERIC_SLOTS, Observation, RawObservation, TOKEN_SLOTS,
    build_observation, build_raw_observation, legal_mask, summarize_events,
)
from .reconstruct import (
    DISCARD_CONTRADICTORY_REVEAL, DISCARD_INCONSISTENT_EVENT,
    DISCARD_TRUNCATED_LOG, DISCARD_UNMAPPABLE_CHOICE,
    DISCARD_UNSUPPORTED_MECHANIC, Discarded, ReconstructOptions, Timestep,
    Trajectory, build_selfplay_trajectories, reconstruct,
)
from .rewards import STATUS_WEIGHT, WIN_BONUS, compute_reward
from .vocab import PAD, UNKNOWN, Vocabulary, default_vocabulary

__all__ = [
    "ACTIONS", "CorruptRecord", "DISCARD_CONTRADICTORY_REVEAL",
    "DISCARD_INCONSISTENT_EVENT", "DISCARD_TRUNCATED_LOG",
    "DISCARD_UNMAPPABLE_CHOICE", "DISCARD_UNSUPPORTED_MECHANIC", "Discarded",
    "MASKED", "NUMERIC_SLOTS", "Observation", "PAD", "RawObservation",
    "ReconstructOptions", "SCHEMA_VERSION", "SchemaMismatch",
    "STATUS_WEIGHT", "Timestep", "TOKEN_SLOTS", "Trajectory", "UNKNOWN",
    "Vocabulary", "WIN_BONUS", "build_observation", "build_raw_observation",
    "build_selfplay_trajectories", "compute_reward", "default_vocabulary",
    "iter_dataset", "legal_mask", "read_dataset", "read_header",
    "reconstruct", "summarize_events", "write_dataset",
]
