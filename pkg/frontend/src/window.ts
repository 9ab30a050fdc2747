/**
 * Context windowing: split a trajectory into non-overlapping slices of at
 * most maxContext timesteps for fixed-context sequence models.
 *
 * Slices are plain views over the same timestep objects, so the
 * prev-action/prev-reward alignment is preserved: slice k's first
 * prevReward equals the reward at global index start-1.
 */

import { LoadedTrajectory, Timestep } from "./schema.js";

export interface ContextSlice {
  start: number;
  timesteps: Timestep[];
}

export function windowTrajectory(
  traj: LoadedTrajectory,
  maxContext: number,
): ContextSlice[] {
  if (!Number.isInteger(maxContext) || maxContext < 1) {
    throw new RangeError(`maxContext must be a positive integer, got ${maxContext}`);
  }
  const slices: ContextSlice[] = [];
  for (let start = 0; start < traj.timesteps.length; start += maxContext) {
    slices.push({
      start,
      timesteps: traj.timesteps.slice(start, start + maxContext),
    });
  }
  return slices;
}
