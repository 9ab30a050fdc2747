export {
  ACTIONS, CorruptRecord, HeaderRecord, LoadedTrajectory, MASKED,
  NUMERIC_SLOTS, SCHEMA_VERSION, SchemaMismatch, Timestep, TOKEN_SLOTS,
  TrajectoryRecord, WIN_BONUS, prevActionOneHot, trajectoryFromRecord,
} from "./schema.js";
export { openDataset, readDataset, readHeader, ReaderOptions } from "./reader.js";
export { ContextSlice, windowTrajectory } from "./window.js";
export { validateTrajectory, ValidationReport } from "./validate.js";
