/**
 * Streaming dataset reader: iterates trajectory records line by line
 * without loading the whole file.
 *
 * In lenient mode corrupt records (including a truncated final line) are
 * skipped. Repeated identical headers mid-stream, as produced by
 * concatenating same-vocabulary files, are skipped; a header with a
 * different vocabulary is a schema error.
 */

import { createReadStream } from "node:fs";
import { open } from "node:fs/promises";
import { createInterface } from "node:readline";

import {
  CorruptRecord,
  HeaderRecord,
  LoadedTrajectory,
  SCHEMA_VERSION,
  SchemaMismatch,
  TrajectoryRecord,
  trajectoryFromRecord,
} from "./schema.js";

export interface ReaderOptions {
  lenient?: boolean;
}

function parseHeader(line: string, lineNumber: number): HeaderRecord {
  let rec: HeaderRecord;
  try {
    rec = JSON.parse(line);
  } catch {
    throw new SchemaMismatch(`line ${lineNumber}: header is not valid JSON`);
  }
  if (rec.kind !== "header") {
    throw new SchemaMismatch("file does not start with a header record");
  }
  if (rec.schema_version !== SCHEMA_VERSION) {
    throw new SchemaMismatch(
      `dataset schema ${rec.schema_version}, expected ${SCHEMA_VERSION}`);
  }
  if (!Array.isArray(rec.vocab) || rec.vocab[0] !== "<pad>" ||
      rec.vocab[1] !== "<unknown>") {
    throw new SchemaMismatch("header vocabulary is malformed");
  }
  return rec;
}

/** Read just the header (vocabulary) of a dataset file. */
export async function readHeader(path: string): Promise<HeaderRecord> {
  const handle = await open(path, "r");
  try {
    const stream = handle.createReadStream({ autoClose: false });
    const lines = createInterface({ input: stream, crlfDelay: Infinity });
    for await (const line of lines) {
      lines.close();
      stream.destroy();
      return parseHeader(line, 1);
    }
  } finally {
    await handle.close();
  }
  throw new SchemaMismatch("empty dataset file has no header");
}

/**
 * Stream trajectories from a dataset file. The header is exposed through
 * the optional onHeader callback before the first record is yielded.
 */
export async function* openDataset(
  path: string,
  options: ReaderOptions = {},
  onHeader?: (header: HeaderRecord) => void,
): AsyncGenerator<LoadedTrajectory> {
  const lenient = options.lenient ?? false;
  const stream = createReadStream(path, { encoding: "utf-8" });
  const lines = createInterface({ input: stream, crlfDelay: Infinity });
  let header: HeaderRecord | null = null;
  let lineNumber = 0;
  for await (const line of lines) {
    lineNumber += 1;
    if (line.trim() === "") {
      continue;
    }
    if (header === null) {
      header = parseHeader(line, lineNumber);
      onHeader?.(header);
      continue;
    }
    let rec: TrajectoryRecord | HeaderRecord;
    try {
      rec = JSON.parse(line);
    } catch {
      if (lenient) continue;
      throw new CorruptRecord(`line ${lineNumber}: invalid JSON`);
    }
    if (rec.kind === "header") {
      const repeat = parseHeader(line, lineNumber);
      if (JSON.stringify(repeat.vocab) !== JSON.stringify(header.vocab)) {
        throw new SchemaMismatch(
          `line ${lineNumber}: concatenated file with a different vocabulary`);
      }
      continue;
    }
    try {
      yield trajectoryFromRecord(rec as TrajectoryRecord);
    } catch (err) {
      if (err instanceof SchemaMismatch) throw err;
      if (lenient) continue;
      throw new CorruptRecord(`line ${lineNumber}: ${String(err)}`);
    }
  }
  if (header === null) {
    throw new SchemaMismatch("empty dataset file has no header");
  }
}

/** Convenience: load a whole file into memory. */
export async function readDataset(
  path: string,
  options: ReaderOptions = {},
): Promise<{ trajectories: LoadedTrajectory[]; header: HeaderRecord }> {
  let header: HeaderRecord | null = null;
  const trajectories: LoadedTrajectory[] = [];
  for await (const traj of openDataset(path, options, (h) => (header = h))) {
    trajectories.push(traj);
  }
  if (header === null) {
    throw new SchemaMismatch("empty dataset file has no header");
  }
  return { trajectories, header };
}
