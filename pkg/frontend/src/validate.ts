/**
 * Invariant re-checks over a loaded trajectory, mirroring the writer's
 * contracts: fixed observation widths, action range, a single terminal
 * step carrying the win bonus, and prev-field alignment.
 */

import {
  ACTIONS,
  LoadedTrajectory,
  MASKED,
  NUMERIC_SLOTS,
  TOKEN_SLOTS,
  WIN_BONUS,
} from "./schema.js";

export interface ValidationReport {
  ok: boolean;
  problems: string[];
}

export function validateTrajectory(traj: LoadedTrajectory): ValidationReport {
  const problems: string[] = [];
  const steps = traj.timesteps;
  steps.forEach((step, t) => {
    if (step.tokens.length !== TOKEN_SLOTS) {
      problems.push(`t=${t}: ${step.tokens.length} token slots`);
    }
    if (step.numeric.length !== NUMERIC_SLOTS) {
      problems.push(`t=${t}: ${step.numeric.length} numeric slots`);
    }
    if (step.illegalMask.length !== ACTIONS) {
      problems.push(`t=${t}: mask has ${step.illegalMask.length} entries`);
    }
    if (!step.tokens.every((id) => Number.isInteger(id) && id >= 0)) {
      problems.push(`t=${t}: token ids must be nonnegative integers`);
    }
    if (!step.numeric.every((x) => Number.isFinite(x))) {
      problems.push(`t=${t}: non-finite numeric feature`);
    }
    if (!Number.isFinite(step.reward)) {
      problems.push(`t=${t}: non-finite reward`);
    }
    const actionOk = step.action === MASKED ||
      (Number.isInteger(step.action) && step.action >= 0 &&
       step.action < ACTIONS);
    if (!actionOk) {
      problems.push(`t=${t}: action ${step.action} out of range`);
    }
    if (step.action !== MASKED && step.illegalMask[step.action]) {
      problems.push(`t=${t}: recorded action is masked illegal`);
    }
    if (Math.abs(step.reward) >= WIN_BONUS / 2 && !step.done) {
      problems.push(`t=${t}: terminal-size reward on a non-terminal step`);
    }
    if (t === 0) {
      if (step.prevAction !== MASKED || step.prevReward !== 0) {
        problems.push("t=0: prev fields must be null");
      }
    } else {
      const prev = steps[t - 1];
      if (step.prevAction !== prev.action) {
        problems.push(`t=${t}: prevAction misaligned`);
      }
      if (step.prevReward !== prev.reward) {
        problems.push(`t=${t}: prevReward misaligned`);
      }
    }
  });
  const terminals = steps.filter((s) => s.done).length;
  if (steps.length > 0) {
    if (terminals !== 1) {
      problems.push(`${terminals} terminal steps`);
    } else if (!steps[steps.length - 1].done) {
      problems.push("terminal step is not last");
    }
  }
  if (traj.povPlayer !== "p1" && traj.povPlayer !== "p2") {
    problems.push(`bad pov ${traj.povPlayer}`);
  }
  return { ok: problems.length === 0, problems };
}
