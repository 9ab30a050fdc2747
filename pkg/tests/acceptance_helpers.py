"""Workers and independent verifiers for the acceptance suite.

Lives outside the test module so process pools can import it. The checks
here deliberately avoid the library's own bookkeeping where possible: the
reward accumulator re-derives shaping totals from raw events, and the
hygiene checker decodes observation tokens back to strings.
"""

from __future__ import annotations

from battlelab.agents import make_agent
from battlelab.engine import to_id
from battlelab.evalharness import run_match
from battlelab.inference import UsageStats
from battlelab.protocol import (
    Damage, Faint, Heal, Switch, TeamSize, Win, parse_replay, serialize_replay,
)
from battlelab.trajectory import (
    MASKED, ReconstructOptions, WIN_BONUS, default_vocabulary, reconstruct,
)


def independent_shaping_total(events, pov: str) -> float:
    """Re-derive the telescoped shaping sum for one POV from raw events.

    Health: per-pokemon fractions tracked directly from switch/damage/heal
    lines (unseen team members count as full). Status: final binary
    presence of the two actives. Faints: counted from faint lines.
    """
    hp: dict[tuple, tuple] = {}
    team_size = {"p1": 6, "p2": 6}
    active = {"p1": None, "p2": None}
    status = {}
    faints = {"p1": 0, "p2": 0}
    for ev in events:
        if isinstance(ev, TeamSize):
            team_size[ev.side] = ev.size
        elif isinstance(ev, Switch):
            key = (ev.pokemon.side, to_id(ev.species))
            hp[key] = (ev.hp.current, ev.hp.max)
            active[ev.pokemon.side] = key
            status[key] = ev.hp.status if ev.hp.status else None
        elif isinstance(ev, (Damage, Heal)):
            side = ev.pokemon.side
            key = active[side]
            hp[key] = (ev.hp.current, ev.hp.max)
            if ev.hp.status:
                status[key] = ev.hp.status
        elif isinstance(ev, Faint):
            side = ev.pokemon.side
            faints[side] += 1
            key = active[side]
            hp[key] = (0, hp[key][1])
            status[key] = None
        else:
            kind = type(ev).__name__
            if kind == "SetStatus":
                status[active[ev.pokemon.side]] = ev.status
            elif kind == "CureStatus":
                status[active[ev.pokemon.side]] = None

    def net_change(side):
        total = 0.0
        seen = 0
        for (s, _), (cur, mx) in hp.items():
            if s == side:
                total += cur / mx
                seen += 1
        total += team_size[side] - seen  # never-revealed members at full
        return total - team_size[side]

    def final_status(side):
        key = active[side]
        if key is None or hp[key][0] == 0:
            return 0
        return 1 if status.get(key) else 0

    opp = "p2" if pov == "p1" else "p1"
    r_hp = net_change(pov) - net_change(opp)
    r_stat = final_status(opp) - final_status(pov)
    r_faint = faints[opp] - faints[pov]
    return r_hp + 0.5 * r_stat + r_faint


def check_hygiene(traj, opp_truth_species, own_species) -> list[str]:
    """Return violation descriptions for opponent info leaking early."""
    vocab = default_vocabulary()
    reveals = traj.annotations["opp_reveals"]
    problems = []
    for t, ts in enumerate(traj.timesteps):
        tokens = [vocab.to_token(i) for i in ts.observation.tokens]
        sp = tokens[53]
        if sp != "<pad>":
            info = reveals.get(sp)
            if info is None or info["first_seen"] > t:
                problems.append(f"t={t}: active species {sp} before reveal")
                continue
            last_move = tokens[57]
            if last_move not in ("<pad>", "struggle"):
                turn = info["moves"].get(last_move)
                if turn is None or turn > t:
                    problems.append(f"t={t}: last move {last_move} before reveal")
            item = tokens[58]
            if item != "<pad>":
                if info["item"] is None or info["item"][1] > t:
                    problems.append(f"t={t}: item {item} before reveal")
            ability = tokens[59]
            if ability != "<pad>":
                if info["ability"] is None or info["ability"][1] > t:
                    problems.append(f"t={t}: ability {ability} before reveal")
        revealed_by_now = {s for s, info in reveals.items()
                          if info["first_seen"] <= t}
        count = round(ts.observation.numeric[37] * 6)
        if count != len(revealed_by_now):
            problems.append(f"t={t}: revealed-count numeric {count} != "
                            f"{len(revealed_by_now)}")
        hidden = opp_truth_species - revealed_by_now - own_species
        for tok in tokens:
            if tok in hidden:
                problems.append(f"t={t}: hidden opponent species {tok} leaked")
            elif tok.startswith("last/opp/switch/"):
                species = tok.rsplit("/", 1)[1]
                info = reveals.get(species)
                if info is None or info["first_seen"] > t:
                    problems.append(f"t={t}: summary leaked switch {species}")
    return problems


def check_reveal_accuracy(traj, truth_opp, truth_own) -> list[str]:
    """Every revealed attribute must match the ground-truth loadout."""
    problems = []
    for label, reveals, truth in (
            ("opp", traj.annotations["opp_reveals"], truth_opp),
            ("own", traj.annotations["own_reveals"], truth_own)):
        for species, info in reveals.items():
            spec = truth.get(species)
            if spec is None:
                problems.append(f"{label}: revealed {species} not on team")
                continue
            if info["level"] != spec.level:
                problems.append(f"{label}: {species} level mismatch")
            for move in info["moves"]:
                if move not in spec.moves:
                    problems.append(f"{label}: {species} move {move} not real")
            if info["item"] is not None and info["item"][0] != spec.item:
                problems.append(f"{label}: {species} item mismatch")
            if info["ability"] is not None and info["ability"][0] != spec.ability:
                problems.append(f"{label}: {species} ability mismatch")
    return problems


def inferred_accuracy(traj, truth_own) -> tuple[int, int]:
    """How often the finalize-filled (never revealed) own attributes match
    the ground-truth loadout: a reported metric, never an assertion."""
    reveals = traj.annotations["own_reveals"]
    inferred = 0
    correct = 0
    for spec in traj.annotations["team"]:
        known = reveals.get(spec.species)
        true_spec = truth_own.get(spec.species)
        if true_spec is None:
            inferred += 1  # wholly inferred species slot
            continue
        revealed_moves = set(known["moves"]) if known else set()
        for move in spec.moves:
            if move not in revealed_moves:
                inferred += 1
                correct += move in true_spec.moves
    return inferred, correct


def closed_loop_batch(args) -> dict:
    """Run a batch of battles through the full closed loop and verify."""
    (format_id, team_list, pairings, seeds) = args
    from battlelab.evalharness import TeamSet
    team_set = TeamSet(kind="variety", format_id=format_id, teams=team_list)
    stats = UsageStats.bundled()
    options = ReconstructOptions(keep_annotations=True)
    out = {"battles": 0, "discards": [], "steps": 0, "masked": 0,
           "label_mismatches": [], "reveal_problems": [],
           "hygiene_problems": [], "reward_problems": [],
           "log_lines": 0, "inferred_attrs": 0, "inferred_correct": 0}
    for pairing, seed in zip(pairings, seeds):
        agent_a = make_agent(pairing[0])
        agent_b = make_agent(pairing[1])
        match = run_match(agent_a, agent_b, team_set, seed=seed, keep_log=True)
        out["battles"] += 1
        text = serialize_replay(match.events)
        out["log_lines"] += text.count("\n")
        doc = parse_replay(text, mode="strict")
        result = reconstruct(doc, stats, pov="both", options=options)
        if not isinstance(result, list):
            out["discards"].append((seed, result.reason, result.detail))
            continue
        truth = {side: {s.species: s for s in match.teams[side]}
                 for side in ("p1", "p2")}
        for traj, side in zip(result, ("p1", "p2")):
            other = "p2" if side == "p1" else "p1"
            actual = match.choices[side]
            if len(traj.timesteps) != len(actual):
                out["label_mismatches"].append(
                    (seed, side, "timestep count",
                     len(traj.timesteps), len(actual)))
                continue
            for sem, act, ts in zip(traj.annotations["semantics"], actual,
                                    traj.timesteps):
                out["steps"] += 1
                if ts.action == MASKED:
                    out["masked"] += 1
                    if sem is not None:
                        out["label_mismatches"].append((seed, side, sem, act))
                    continue
                if sem != act:
                    out["label_mismatches"].append((seed, side, sem, act))
            out["reveal_problems"].extend(
                (seed, side, p) for p in
                check_reveal_accuracy(traj, truth[other], truth[side]))
            backfilled = {s.species for s in traj.annotations["team"]}
            out["hygiene_problems"].extend(
                (seed, side, p) for p in
                check_hygiene(traj, set(truth[other]), backfilled))
            inferred, correct = inferred_accuracy(traj, truth[side])
            out["inferred_attrs"] += inferred
            out["inferred_correct"] += correct
            # reward accounting: shaped total plus the terminal bonus
            total = sum(ts.reward for ts in traj.timesteps)
            expected = independent_shaping_total(doc.events, side)
            win_term = 0.0
            if isinstance(doc.events[-1], Win):
                winner_is_pov = doc.events[-1].winner == doc.players[0 if side == "p1" else 1]
                win_term = WIN_BONUS if winner_is_pov else -WIN_BONUS
            if traj.timesteps and abs(total - (expected + win_term)) > 1e-9:
                out["reward_problems"].append(
                    (seed, side, total, expected + win_term))
            for i, ts in enumerate(traj.timesteps):
                bonus_here = abs(ts.reward) > WIN_BONUS / 2
                if bonus_here and not ts.done:
                    out["reward_problems"].append(
                        (seed, side, f"bonus-size reward at non-terminal {i}"))
    return out
