/**
 * Trajectory dataset schema (version 1).
 *
 * Files are newline-delimited JSON: a header record carrying the token
 * vocabulary, then one trajectory per line as parallel arrays over
 * timesteps. This mirrors the writer's schema exactly; the reader never
 * writes.
 */

export const SCHEMA_VERSION = 1;
export const TOKEN_SLOTS = 87;
export const NUMERIC_SLOTS = 48;
export const ACTIONS = 9;
export const MASKED = -1;
export const WIN_BONUS = 100;

export class SchemaMismatch extends Error {}
export class CorruptRecord extends Error {}

export interface HeaderRecord {
  kind: "header";
  schema_version: number;
  vocab: string[];
  vocab_fingerprint?: string;
}

export interface TrajectoryRecord {
  kind: "trajectory";
  schema_version: number;
  format_id: string;
  pov_player: "p1" | "p2";
  rating: number | null;
  source: string;
  fill_policy: string | null;
  tokens: number[][];
  numeric: number[][];
  illegal_mask: number[][];
  prev_action: number[];
  prev_reward: number[];
  action: number[];
  reward: number[];
  done: number[];
  filled: number[];
}

export interface Timestep {
  tokens: number[];
  numeric: number[];
  illegalMask: boolean[];
  prevAction: number;
  prevReward: number;
  action: number;
  reward: number;
  done: boolean;
  filled: boolean;
}

export interface LoadedTrajectory {
  formatId: string;
  povPlayer: "p1" | "p2";
  rating: number | null;
  source: string;
  fillPolicy: string | null;
  timesteps: Timestep[];
}

/** Materialize the one-hot previous-action input (9 actions + null slot). */
export function prevActionOneHot(step: Timestep): number[] {
  const out = new Array<number>(ACTIONS + 1).fill(0);
  if (step.prevAction === MASKED) {
    out[ACTIONS] = 1;
  } else {
    out[step.prevAction] = 1;
  }
  return out;
}

const ARRAY_FIELDS: (keyof TrajectoryRecord)[] = [
  "tokens", "numeric", "illegal_mask", "prev_action", "prev_reward",
  "action", "reward", "done", "filled",
];

export function trajectoryFromRecord(rec: TrajectoryRecord): LoadedTrajectory {
  if (rec.schema_version !== SCHEMA_VERSION) {
    throw new SchemaMismatch(
      `trajectory schema ${rec.schema_version}, expected ${SCHEMA_VERSION}`);
  }
  const n = rec.action.length;
  for (const field of ARRAY_FIELDS) {
    const value = rec[field] as unknown[];
    if (!Array.isArray(value) || value.length !== n) {
      throw new CorruptRecord(`field ${field} is not aligned`);
    }
  }
  const timesteps: Timestep[] = [];
  for (let i = 0; i < n; i++) {
    timesteps.push({
      tokens: rec.tokens[i],
      numeric: rec.numeric[i],
      illegalMask: rec.illegal_mask[i].map((b) => b !== 0),
      prevAction: rec.prev_action[i],
      prevReward: rec.prev_reward[i],
      action: rec.action[i],
      reward: rec.reward[i],
      done: rec.done[i] !== 0,
      filled: rec.filled[i] !== 0,
    });
  }
  return {
    formatId: rec.format_id,
    povPlayer: rec.pov_player,
    rating: rec.rating ?? null,
    source: rec.source ?? "replay",
    fillPolicy: rec.fill_policy ?? null,
    timesteps,
  };
}
