import { mkdtemp, readFile, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  CorruptRecord,
  MASKED,
  SchemaMismatch,
  openDataset,
  prevActionOneHot,
  readDataset,
  readHeader,
  validateTrajectory,
  windowTrajectory,
} from "../src/index.js";

const GOLDEN = new URL("../testdata/golden.jsonl", import.meta.url).pathname;
const EXPECTED = new URL("../testdata/golden_expected.json", import.meta.url).pathname;

async function expectedDoc() {
  return JSON.parse(await readFile(EXPECTED, "utf-8"));
}

async function goldenLines(): Promise<string[]> {
  const text = await readFile(GOLDEN, "utf-8");
  return text.split("\n").filter((l) => l.trim() !== "");
}

describe("header", () => {
  it("reads the vocabulary with reserved ids first", async () => {
    const header = await readHeader(GOLDEN);
    const expected = await expectedDoc();
    expect(header.vocab.length).toBe(expected.vocab_size);
    expect(header.vocab[0]).toBe("<pad>");
    expect(header.vocab[1]).toBe("<unknown>");
    expect(header.vocab_fingerprint).toBe(expected.vocab_fingerprint);
  });

  it("rejects a future schema version", async () => {
    const dir = await mkdtemp(join(tmpdir(), "blds-"));
    const path = join(dir, "future.jsonl");
    await writeFile(path,
      '{"kind": "header", "schema_version": 99, "vocab": ["<pad>", "<unknown>"]}\n');
    await expect(readHeader(path)).rejects.toBeInstanceOf(SchemaMismatch);
  });

  it("rejects a file without a header", async () => {
    const dir = await mkdtemp(join(tmpdir(), "blds-"));
    const path = join(dir, "headless.jsonl");
    await writeFile(path, '{"kind": "trajectory"}\n');
    await expect(readDataset(path)).rejects.toBeInstanceOf(SchemaMismatch);
  });
});

describe("golden corpus", () => {
  it("loads every record field-exactly", async () => {
    const expected = await expectedDoc();
    const lines = await goldenLines();
    const raw = lines.slice(1).map((l) => JSON.parse(l));
    const { trajectories } = await readDataset(GOLDEN);
    expect(trajectories.length).toBe(expected.count);
    trajectories.forEach((traj, i) => {
      const rec = raw[i];
      expect(traj.formatId).toBe(rec.format_id);
      expect(traj.povPlayer).toBe(rec.pov_player);
      expect(traj.rating).toBe(rec.rating);
      expect(traj.source).toBe(rec.source);
      expect(traj.timesteps.length).toBe(expected.lengths[i]);
      traj.timesteps.forEach((step, t) => {
        expect(step.tokens).toEqual(rec.tokens[t]);
        expect(step.numeric).toEqual(rec.numeric[t]);
        expect(step.illegalMask).toEqual(
          rec.illegal_mask[t].map((b: number) => b !== 0));
        expect(step.prevAction).toBe(rec.prev_action[t]);
        expect(step.prevReward).toBe(rec.prev_reward[t]);
        expect(step.action).toBe(rec.action[t]);
        expect(step.reward).toBe(rec.reward[t]);
        expect(step.done).toBe(rec.done[t] !== 0);
        expect(step.filled).toBe(rec.filled[t] !== 0);
      });
      const total = traj.timesteps.reduce((acc, s) => acc + s.reward, 0);
      expect(total).toBeCloseTo(expected.reward_sums[i], 8);
    });
  });

  it("passes validation on every record", async () => {
    const { trajectories } = await readDataset(GOLDEN);
    for (const traj of trajectories) {
      const report = validateTrajectory(traj);
      expect(report.problems).toEqual([]);
      expect(report.ok).toBe(true);
    }
  });

  it("streams without preloading (iterator protocol)", async () => {
    let count = 0;
    for await (const traj of openDataset(GOLDEN)) {
      count += 1;
      if (count === 2) break; // early exit must not throw
    }
    expect(count).toBe(2);
  });
});

describe("lenient mode", () => {
  it("yields all prior records when the last line is truncated", async () => {
    const expected = await expectedDoc();
    const text = await readFile(GOLDEN, "utf-8");
    const dir = await mkdtemp(join(tmpdir(), "blds-"));
    const path = join(dir, "trunc.jsonl");
    await writeFile(path, text.slice(0, text.length - 50));
    const { trajectories } = await readDataset(path, { lenient: true });
    expect(trajectories.length).toBe(expected.count - 1);
    await expect(readDataset(path)).rejects.toBeInstanceOf(CorruptRecord);
  });

  it("accepts concatenated same-vocabulary files", async () => {
    const expected = await expectedDoc();
    const text = await readFile(GOLDEN, "utf-8");
    const dir = await mkdtemp(join(tmpdir(), "blds-"));
    const path = join(dir, "cat.jsonl");
    await writeFile(path, text + text);
    const { trajectories } = await readDataset(path);
    expect(trajectories.length).toBe(expected.count * 2);
  });

  it("rejects concatenation with a different vocabulary", async () => {
    const lines = await goldenLines();
    const dir = await mkdtemp(join(tmpdir(), "blds-"));
    const path = join(dir, "mixed.jsonl");
    const otherHeader =
      '{"kind": "header", "schema_version": 1, "vocab": ["<pad>", "<unknown>", "x"]}';
    await writeFile(path, lines[0] + "\n" + lines[1] + "\n" + otherHeader + "\n");
    await expect(readDataset(path)).rejects.toBeInstanceOf(SchemaMismatch);
  });
});

describe("windowing", () => {
  it("splits 130 steps at max 128 into 128 + 2", async () => {
    const expected = await expectedDoc();
    const { trajectories } = await readDataset(GOLDEN);
    const long = trajectories[expected.long_index];
    expect(long.timesteps.length).toBeGreaterThanOrEqual(130);
    const view = { ...long, timesteps: long.timesteps.slice(0, 130) };
    const slices = windowTrajectory(view, 128);
    expect(slices.map((s) => s.timesteps.length)).toEqual([128, 2]);
    expect(slices[0].start).toBe(0);
    expect(slices[1].start).toBe(128);
  });

  it("single slice when the trajectory fits", async () => {
    const { trajectories } = await readDataset(GOLDEN);
    const short = trajectories.find((t) => t.timesteps.length <= 128)!;
    const slices = windowTrajectory(short, 128);
    expect(slices.length).toBe(1);
    expect(slices[0].timesteps.length).toBe(short.timesteps.length);
  });

  it("preserves prev-field alignment across slice boundaries", async () => {
    const expected = await expectedDoc();
    const { trajectories } = await readDataset(GOLDEN);
    const long = trajectories[expected.long_index];
    const slices = windowTrajectory(long, 32);
    for (const slice of slices.slice(1)) {
      const before = long.timesteps[slice.start - 1];
      expect(slice.timesteps[0].prevReward).toBe(before.reward);
      expect(slice.timesteps[0].prevAction).toBe(before.action);
    }
  });

  it("rejects a nonpositive context", async () => {
    const { trajectories } = await readDataset(GOLDEN);
    expect(() => windowTrajectory(trajectories[0], 0)).toThrow(RangeError);
  });
});

describe("one-hot helper", () => {
  it("uses the null slot for masked previous actions", async () => {
    const { trajectories } = await readDataset(GOLDEN);
    const first = trajectories[0].timesteps[0];
    expect(first.prevAction).toBe(MASKED);
    const hot = prevActionOneHot(first);
    expect(hot.length).toBe(10);
    expect(hot[9]).toBe(1);
    expect(hot.reduce((a, b) => a + b, 0)).toBe(1);
  });
});
