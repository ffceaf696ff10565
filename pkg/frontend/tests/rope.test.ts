import * as tf from "@tensorflow/tfjs";
import { afterEach, beforeAll, describe, expect, it } from "vitest";

import { initBackend } from "../src/backend.js";
import { RopeTable } from "../src/rope.js";

beforeAll(async () => {
  await initBackend();
});

const tables: RopeTable[] = [];

function rope(dim: number, base?: number): RopeTable {
  const t = new RopeTable(dim, base);
  tables.push(t);
  return t;
}

afterEach(() => {
  while (tables.length > 0) tables.pop()!.dispose();
});

function toNested(x: tf.Tensor3D): number[][][] {
  return x.arraySync() as number[][][];
}

describe("RopeTable", () => {
  it("is the identity at position 0", () => {
    const r = rope(4);
    const x = tf.randomNormal([2, 1, 4], 0, 1, "float32", 7) as tf.Tensor3D;
    const y = r.apply(x);
    expect(toNested(y).flat(2)).toEqual(
      toNested(x).flat(2).map((v) => expect.closeTo(v, 5)));
    tf.dispose([x, y]);
  });

  it("preserves the norm of each rotated pair", () => {
    const r = rope(6);
    const x = tf.randomNormal([1, 5, 6], 0, 1, "float32", 11) as tf.Tensor3D;
    const y = r.apply(x);
    const xs = toNested(x)[0];
    const ys = toNested(y)[0];
    for (let t = 0; t < 5; t++) {
      for (let i = 0; i < 3; i++) {
        const before = Math.hypot(xs[t][i], xs[t][i + 3]);
        const after = Math.hypot(ys[t][i], ys[t][i + 3]);
        expect(after).toBeCloseTo(before, 5);
      }
    }
    tf.dispose([x, y]);
  });

  it("makes dot products depend only on relative position", () => {
    const r = rope(8);
    const qv = tf.randomNormal([1, 1, 8], 0, 1, "float32", 3).tile([1, 12, 1]) as tf.Tensor3D;
    const kv = tf.randomNormal([1, 1, 8], 0, 1, "float32", 4).tile([1, 12, 1]) as tf.Tensor3D;
    const q = r.apply(qv);
    const k = r.apply(kv);
    const dots = tf.matMul(q, k, false, true).arraySync() as number[][][];
    // same offset, different absolute positions: q_p . k_{p-2}
    expect(dots[0][5][3]).toBeCloseTo(dots[0][9][7], 4);
    expect(dots[0][2][0]).toBeCloseTo(dots[0][11][9], 4);
    // a different offset must differ (the content vectors are fixed)
    expect(Math.abs(dots[0][5][3] - dots[0][5][1])).toBeGreaterThan(1e-3);
    tf.dispose([qv, kv, q, k]);
  });

  it("leaves the last feature unrotated for odd dims", () => {
    const r = rope(3);
    const x = tf.randomNormal([1, 4, 3], 0, 1, "float32", 9) as tf.Tensor3D;
    const y = r.apply(x);
    const xs = toNested(x)[0];
    const ys = toNested(y)[0];
    for (let t = 0; t < 4; t++) {
      expect(ys[t][2]).toBeCloseTo(xs[t][2], 6);
    }
    // the rotated pair still moves at t > 0
    expect(Math.abs(ys[2][0] - xs[2][0]) + Math.abs(ys[2][1] - xs[2][1])).toBeGreaterThan(1e-4);
    tf.dispose([x, y]);
  });

  it("passes dim 1 through untouched", () => {
    const r = rope(1);
    const x = tf.tensor3d([[[0.5], [-2]]]);
    const y = r.apply(x);
    expect(toNested(y)).toEqual([[[0.5], [-2]]]);
    tf.dispose([x, y]);
  });

  it("rejects bad dims and mismatched inputs", () => {
    expect(() => new RopeTable(0)).toThrow(RangeError);
    expect(() => new RopeTable(2.5)).toThrow(/positive integer/);
    const r = rope(4);
    const x = tf.zeros([1, 2, 6]) as tf.Tensor3D;
    expect(() => r.apply(x)).toThrow(/expected last dim 4, got 6/);
    x.dispose();
  });

  it("survives a surrounding tidy and reuses its cache", () => {
    const r = rope(4);
    const run = () => tf.tidy(() => {
      const x = tf.ones([1, 6, 4]) as tf.Tensor3D;
      return r.apply(x).sum().arraySync() as number;
    });
    const first = run();
    // cache built inside the first tidy must still be alive here
    expect(run()).toBeCloseTo(first, 5);
  });
});
