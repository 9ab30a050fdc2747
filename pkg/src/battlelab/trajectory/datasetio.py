"""Trajectory dataset files: newline-delimited JSON records.

Line 1 is a header record carrying the schema version and the vocabulary;
every following line is one trajectory. Appending to an existing file
requires the same vocabulary (same fingerprint), which keeps plain file
concatenation of same-vocabulary datasets valid: readers skip repeated
identical headers mid-stream.

Schema (version 1) per trajectory record: parallel arrays over timesteps
(``tokens`` 87 ids, ``numeric`` 48 floats, ``illegal_mask`` 9 bits,
``prev_action``, ``prev_reward``, ``action`` (-1 = masked), ``reward``,
``done`` bits, ``filled`` bits) plus format/POV/rating/source metadata.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator, Optional

from .observation import Observation
from .reconstruct import Timestep, Trajectory
from .vocab import Vocabulary

SCHEMA_VERSION = 1


class SchemaMismatch(Exception):
    pass


class CorruptRecord(Exception):
    pass


def _traj_record(traj: Trajectory) -> dict:
    steps = traj.timesteps
    return {
        "kind": "trajectory",
        "schema_version": traj.schema_version,
        "format_id": traj.format_id,
        "pov_player": traj.pov_player,
        "rating": traj.rating,
        "source": traj.source,
        "fill_policy": traj.fill_policy,
        "tokens": [t.observation.tokens for t in steps],
        "numeric": [t.observation.numeric for t in steps],
        "illegal_mask": [[int(b) for b in t.observation.illegal_mask] for t in steps],
        "prev_action": [t.prev_action for t in steps],
        "prev_reward": [t.prev_reward for t in steps],
        "action": [t.action for t in steps],
        "reward": [t.reward for t in steps],
        "done": [int(t.done) for t in steps],
        "filled": [int(t.filled) for t in steps],
    }


def _traj_from_record(rec: dict) -> Trajectory:
    version = rec.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"trajectory schema {version!r}, expected {SCHEMA_VERSION}")
    steps = []
    n = len(rec["action"])
    for i in range(n):
        obs = Observation(tokens=rec["tokens"][i], numeric=rec["numeric"][i],
                          illegal_mask=[bool(b) for b in rec["illegal_mask"][i]])
        steps.append(Timestep(observation=obs,
                              prev_action=rec["prev_action"][i],
                              prev_reward=rec["prev_reward"][i],
                              action=rec["action"][i],
                              reward=rec["reward"][i],
                              done=bool(rec["done"][i]),
                              filled=bool(rec["filled"][i])))
    return Trajectory(format_id=rec["format_id"], pov_player=rec["pov_player"],
                      timesteps=steps, rating=rec.get("rating"),
                      source=rec.get("source", "replay"),
                      fill_policy=rec.get("fill_policy"),
                      schema_version=version)


def _header_record(vocab: Vocabulary) -> dict:
    return {"kind": "header", "schema_version": SCHEMA_VERSION,
            "vocab": vocab.tokens(), "vocab_fingerprint": vocab.fingerprint()}


def write_dataset(trajectories, path, vocab: Vocabulary, append: bool = False) -> int:
    """Write (or append) trajectory records; returns the number written."""
    path = Path(path)
    mode = "a" if append and path.exists() and path.stat().st_size > 0 else "w"
    if mode == "a":
        existing = read_header(path)
        if existing.fingerprint() != vocab.fingerprint():
            raise SchemaMismatch("append with a different vocabulary")
    count = 0
    with path.open(mode, encoding="utf-8") as f:
        if mode == "w":
            f.write(json.dumps(_header_record(vocab)) + "\n")
        for traj in trajectories:
            f.write(json.dumps(_traj_record(traj)) + "\n")
            count += 1
    return count


def read_header(path) -> Vocabulary:
    with Path(path).open(encoding="utf-8") as f:
        first = f.readline()
    if not first.strip():
        raise SchemaMismatch("empty dataset file has no header")
    rec = json.loads(first)
    if rec.get("kind") != "header":
        raise SchemaMismatch("file does not start with a header record")
    if rec.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(f"dataset schema {rec.get('schema_version')!r}, "
                             f"expected {SCHEMA_VERSION}")
    return Vocabulary(rec["vocab"])


def iter_dataset(path, lenient: bool = False) -> Iterator[Trajectory]:
    """Stream trajectories from a dataset file.

    In lenient mode corrupt records (including a truncated final line) are
    skipped instead of raising. Repeated identical header lines, as
    produced by concatenating same-vocabulary files, are skipped.
    """
    path = Path(path)
    header: Optional[Vocabulary] = None
    with path.open(encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                if lenient:
                    continue
                raise CorruptRecord(f"line {number}: invalid JSON") from None
            kind = rec.get("kind")
            if kind == "header":
                vocab = Vocabulary(rec["vocab"])
                if rec.get("schema_version") != SCHEMA_VERSION:
                    raise SchemaMismatch(f"line {number}: dataset schema "
                                         f"{rec.get('schema_version')!r}")
                if header is None:
                    header = vocab
                elif vocab.fingerprint() != header.fingerprint():
                    raise SchemaMismatch(f"line {number}: concatenated file with "
                                         "a different vocabulary")
                continue
            if number == 1:
                raise SchemaMismatch("file does not start with a header record")
            try:
                yield _traj_from_record(rec)
            except SchemaMismatch:
                raise
            except (KeyError, TypeError, IndexError) as err:
                if lenient:
                    continue
                raise CorruptRecord(f"line {number}: {err}") from None


def read_dataset(path, lenient: bool = False) -> tuple[list[Trajectory], Vocabulary]:
    """Load an entire dataset file; returns (trajectories, vocabulary)."""
    path = Path(path)
    if not path.exists() or path.stat().st_size == 0:
        return [], Vocabulary.from_tokens([])
    vocab = read_header(path)
    return list(iter_dataset(path, lenient=lenient)), vocab
