"""Replay-to-trajectory reconstruction.

Walks a replay's event stream once, maintaining the spectator tracker and
per-side reveal bookkeeping, and snapshots the battle at every decision
point. At battle end the hidden team details are inferred from usage
statistics, the POV player's own team is backfilled to every timestep (a
player always knew their own team), and per-step observations, action
labels, and shaped rewards are emitted.

Any ambiguity or consistency failure yields :class:`Discarded` with a
machine-readable reason instead of a trajectory.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Union

from ..engine import (
    ActionChoice, BattleState, NO_STATUS, PokemonSpec, PokemonState,
    ReplayTracker, InconsistentEvent, TurnDeltas, UnsupportedMechanic,
    bench_order, get_gen_for_format, move_slot_order, to_id,
)
from ..inference import ContradictoryReveal, PartialTeam, UsageStats, finalize
from ..protocol import Cant, Drag, Move, ReplayDocument, Switch, Turn
from .observation import MASKED, Observation, build_raw_observation, legal_mask, summarize_events
from .rewards import compute_reward
from .vocab import Vocabulary, default_vocabulary

DISCARD_CONTRADICTORY_REVEAL = "ContradictoryReveal"
DISCARD_INCONSISTENT_EVENT = "InconsistentEvent"
DISCARD_UNMAPPABLE_CHOICE = "UnmappableChoice"
DISCARD_UNSUPPORTED_MECHANIC = "UnsupportedMechanic"
DISCARD_TRUNCATED_LOG = "TruncatedLog"


@dataclass
class Timestep:
    observation: Observation
    prev_action: int  # -1 on the first step
    prev_reward: float
    action: int  # -1 when masked
    reward: float
    done: bool
    filled: bool = False


@dataclass
class Trajectory:
    format_id: str
    pov_player: str
    timesteps: list[Timestep]
    rating: Optional[int] = None
    source: str = "replay"
    fill_policy: Optional[str] = None
    schema_version: int = 1
    # debugging/verification sidecar (never serialized): per-step action
    # semantics, the backfilled own team, and opponent reveal turns
    annotations: Optional[dict] = None

    def __len__(self) -> int:
        return len(self.timesteps)


@dataclass
class Discarded:
    reason: str
    detail: str = ""
    format_id: Optional[str] = None


@dataclass
class ReconstructOptions:
    finalize_mode: str = "argmax"
    seed: int = 0
    fill_policy: Optional[object] = None  # needs .name and .choose_action
    vocab: Optional[Vocabulary] = None
    set_library: Optional[object] = None
    merge_weight: float = 0.5
    keep_annotations: bool = False


class _Unmappable(Exception):
    pass


class _Decision:
    __slots__ = ("snapshot", "phase", "acting", "actions", "found", "buffer")

    def __init__(self, snapshot: BattleState, phase: str, acting: dict,
                 buffer: list):
        self.snapshot = snapshot
        self.phase = phase
        self.acting = acting
        self.actions: dict[str, Optional[tuple]] = {}
        self.found: dict[str, bool] = {}
        self.buffer = buffer


def reconstruct(doc: ReplayDocument, stats: UsageStats, pov: str = "both",
                options: Optional[ReconstructOptions] = None
                ) -> Union[list[Trajectory], Discarded]:
    """Reconstruct POV trajectories from a parsed replay.

    ``pov`` is ``p1``, ``p2``, or ``both``. Returns the trajectories in
    side order, or a single :class:`Discarded` describing why this replay
    cannot be trusted.
    """
    options = options or ReconstructOptions()
    try:
        get_gen_for_format(doc.format_id)
    except ValueError as err:
        return Discarded(DISCARD_UNSUPPORTED_MECHANIC, str(err), doc.format_id)
    return _build(doc.format_id, doc.players, doc.events, stats, pov, options,
                  own_teams=None, rating=doc.rating, source="replay")


def build_selfplay_trajectories(format_id: str, players: tuple[str, str],
                                events, own_teams: dict[str, list[PokemonSpec]],
                                pov: str = "both",
                                options: Optional[ReconstructOptions] = None
                                ) -> Union[list[Trajectory], Discarded]:
    """Trajectory extraction for locally simulated battles.

    Identical pipeline, but each POV's own side is the known ground-truth
    team instead of an inferred one.
    """
    options = options or ReconstructOptions()
    return _build(format_id, players, events, None, pov, options,
                  own_teams=own_teams, rating=None, source="selfplay")


def _build(format_id, players, events, stats, pov, options, own_teams,
           rating, source) -> Union[list[Trajectory], Discarded]:
    data = get_gen_for_format(format_id)
    tracker = ReplayTracker(format_id, players)
    partials = {"p1": PartialTeam("p1"), "p2": PartialTeam("p2")}
    decisions: list[_Decision] = []
    buffer: list = []
    current: Optional[_Decision] = None

    try:
        for ev in events:
            if isinstance(ev, Turn):
                tracker.apply(ev)
                d = _Decision(tracker.state.clone(), "move",
                              {"p1": True, "p2": True}, buffer)
                buffer = []
                decisions.append(d)
                current = d
                continue
            if isinstance(ev, (Switch, Drag)):
                side_id = ev.pokemon.side
                if tracker.state.side(side_id).pending_replace:
                    other = "p2" if side_id == "p1" else "p1"
                    d = _Decision(tracker.state.clone(), "forceswitch",
                                  {side_id: True, other: False}, buffer)
                    buffer = []
                    if isinstance(ev, Switch):
                        d.actions[side_id] = ("switch", to_id(ev.species))
                    d.found[side_id] = True
                    decisions.append(d)
                elif current is not None and not current.found.get(side_id):
                    if isinstance(ev, Switch):
                        current.actions[side_id] = ("switch", to_id(ev.species))
                    current.found[side_id] = True  # dragged: choice stays hidden
            elif isinstance(ev, Move):
                side_id = ev.pokemon.side
                if current is not None and not current.found.get(side_id):
                    current.actions[side_id] = ("move", to_id(ev.move))
                    current.found[side_id] = True
            elif isinstance(ev, Cant):
                side_id = ev.pokemon.side
                if current is not None and not current.found.get(side_id):
                    current.found[side_id] = True  # acted, but choice unrevealed
            side_attr = getattr(ev, "pokemon", None)
            reveal_turn = len(decisions)
            if side_attr is not None:
                partials[side_attr.side].update_from_event(ev, reveal_turn)
            else:
                ev_side = getattr(ev, "side", None)
                if ev_side in ("p1", "p2"):
                    partials[ev_side].update_from_event(ev, reveal_turn)
            tracker.apply(ev)
            buffer.append(ev)
    except ContradictoryReveal as err:
        return Discarded(DISCARD_CONTRADICTORY_REVEAL, str(err), format_id)
    except InconsistentEvent as err:
        return Discarded(DISCARD_INCONSISTENT_EVENT, str(err), format_id)
    except UnsupportedMechanic as err:
        return Discarded(DISCARD_UNSUPPORTED_MECHANIC, str(err), format_id)

    if tracker.state.outcome is None:
        return Discarded(DISCARD_TRUNCATED_LOG, "log ends without win or tie",
                         format_id)

    povs = ("p1", "p2") if pov == "both" else (pov,)
    teams: dict[str, list[PokemonSpec]] = {}
    try:
        for side_id in povs:
            if own_teams is not None:
                teams[side_id] = own_teams[side_id]
            else:
                fmt_stats = stats.for_format(format_id)
                teams[side_id] = finalize(partials[side_id], fmt_stats, data,
                                          mode=options.finalize_mode,
                                          seed=options.seed,
                                          set_library=options.set_library,
                                          merge_weight=options.merge_weight)
    except ContradictoryReveal as err:
        return Discarded(DISCARD_CONTRADICTORY_REVEAL, str(err), format_id)

    vocab = options.vocab or default_vocabulary()
    out = []
    try:
        for side_id in povs:
            traj = _assemble(side_id, decisions, tracker.state, teams[side_id],
                             options, vocab, data, format_id, rating, source)
            if options.keep_annotations:
                traj.annotations = _annotations(side_id, decisions, teams[side_id],
                                                partials)
            out.append(traj)
    except _Unmappable as err:
        return Discarded(DISCARD_UNMAPPABLE_CHOICE, str(err), format_id)
    return out


def _annotations(pov: str, decisions: list["_Decision"], own_team, partials) -> dict:
    opp = "p2" if pov == "p1" else "p1"
    semantics = [d.actions.get(pov) for d in decisions if d.acting.get(pov)]
    # reveal bookkeeping is in global decision indices; translate to this
    # POV's timestep indices (an attribute revealed before global index g is
    # visible from the POV's next decision at or after g)
    prefix = []
    count = 0
    for d in decisions:
        prefix.append(count)
        if d.acting.get(pov):
            count += 1
    total = count

    def local(turn: int) -> int:
        if 0 <= turn < len(prefix):
            return prefix[turn]
        return total

    def slot_view(slot) -> dict:
        return {
            "first_seen": local(slot.first_seen),
            "moves": {m: local(t) for m, t in slot.moves.items()},
            "item": (slot.item[0], local(slot.item[1])) if slot.item else None,
            "ability": ((slot.ability[0], local(slot.ability[1]))
                        if slot.ability else None),
            "level": slot.level,
        }

    reveals = {s.species: slot_view(s) for s in partials[opp].slots.values()}
    own_reveals = {s.species: slot_view(s) for s in partials[pov].slots.values()}
    return {"semantics": semantics, "team": own_team,
            "opp_reveals": reveals, "own_reveals": own_reveals}


def _aggregate(state: BattleState) -> dict[str, tuple]:
    out = {}
    for side in state.sides:
        hp = sum(p.hp_fraction for p in side.team) + \
            max(0, side.team_size - len(side.team))
        faints = sum(1 for p in side.team if p.fainted)
        active = side.active
        status = (active is not None and not active.fainted
                  and active.status != NO_STATUS)
        out[side.side] = (hp, faints, status)
    return out


def _deltas(before: dict, after: dict, side_id: str) -> TurnDeltas:
    b, a = before[side_id], after[side_id]
    return TurnDeltas(hp_delta=a[0] - b[0], faints=a[1] - b[1],
                      status_start=b[2], status_end=a[2])


def _merge_own(snapshot: BattleState, pov: str, own_team: list[PokemonSpec],
               data) -> BattleState:
    """Backfill: the POV side reflects the full team as if known from turn 0."""
    state = snapshot.clone()
    side = state.side(pov)
    by_species = {sp.species: sp for sp in own_team}
    for mon in side.team:
        sp = by_species.pop(mon.spec.species, None)
        if sp is None:
            continue
        mon.spec.moves = list(sp.moves)
        mon.spec.item = sp.item
        mon.spec.ability = sp.ability
        mon.spec.level = sp.level
        if sp.types:
            mon.spec.types = sp.types
        mon.item_revealed = True
        mon.ability_revealed = True
    for sp in own_team:
        if sp.species not in by_species:
            continue
        spec = sp.clone()
        if spec.stats is None and spec.species in data.species:
            spec.stats = data.compute_stats(data.species[spec.species], spec.level)
        max_hp = spec.stats["hp"] if spec.stats else 100
        mon = PokemonState(spec, max_hp=max_hp)
        mon.species_revealed = True
        mon.item_revealed = True
        mon.ability_revealed = True
        side.team.append(mon)
    return state


def _label(decision: _Decision, pov: str, merged: BattleState,
           mask: list[bool], options: ReconstructOptions, t: int) -> tuple[int, bool]:
    semantic = decision.actions.get(pov)
    if semantic is None:
        policy = options.fill_policy
        if policy is None:
            return MASKED, False
        legal = [ActionChoice(i) for i, illegal in enumerate(mask) if not illegal]
        if not legal:
            return MASKED, False
        rng = random.Random(f"{options.seed}:{pov}:{t}")
        choice = policy.choose_action(merged, pov, legal, rng)
        return choice.index, True
    kind, payload = semantic
    side = merged.side(pov)
    if kind == "move":
        if payload == "struggle":
            return 0, False
        active = side.active
        slots = move_slot_order(active.spec.moves)[:4]
        if payload not in slots:
            raise _Unmappable(f"move {payload!r} not in the finalized moveset")
        return slots.index(payload), False
    for k, ti in enumerate(bench_order(side)[:5]):
        if side.team[ti].spec.species == payload:
            return 4 + k, False
    raise _Unmappable(f"switch target {payload!r} not on the finalized team")


def _assemble(pov: str, decisions: list[_Decision], final_state: BattleState,
              own_team: list[PokemonSpec], options: ReconstructOptions,
              vocab: Vocabulary, data, format_id: str, rating, source) -> Trajectory:
    opp = "p2" if pov == "p1" else "p1"
    pov_decisions = [d for d in decisions if d.acting.get(pov)]
    fill_name = getattr(options.fill_policy, "name", None) \
        if options.fill_policy is not None else None
    traj = Trajectory(format_id=format_id, pov_player=pov, timesteps=[],
                      rating=rating, source=source, fill_policy=fill_name)
    if not pov_decisions:
        return traj

    aggregates = [_aggregate(d.snapshot) for d in pov_decisions]
    aggregates.append(_aggregate(final_state))
    outcome = final_state.outcome
    prev_action = MASKED
    prev_reward = 0.0
    last = len(pov_decisions) - 1
    for t, decision in enumerate(pov_decisions):
        merged = _merge_own(decision.snapshot, pov, own_team, data)
        mask = legal_mask(merged, pov)
        summary = summarize_events(decision.buffer, pov)
        raw = build_raw_observation(merged, pov, summary=summary, mask=mask)
        action, filled = _label(decision, pov, merged, mask, options, t)
        win = 0
        if t == last and outcome is not None and outcome[0] == "win":
            win = 1 if outcome[1] == pov else -1
        reward = compute_reward(_deltas(aggregates[t], aggregates[t + 1], pov),
                                _deltas(aggregates[t], aggregates[t + 1], opp),
                                win)
        traj.timesteps.append(Timestep(observation=raw.encode(vocab),
                                       prev_action=prev_action,
                                       prev_reward=prev_reward,
                                       action=action, reward=reward,
                                       done=t == last, filled=filled))
        prev_action = action
        prev_reward = reward
    return traj
