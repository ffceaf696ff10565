import * as tf from "@tensorflow/tfjs";
import { beforeAll, describe, expect, it } from "vitest";

import { initBackend } from "../src/backend.js";
import { LstmNet, SequenceNet, TransformerNet, dense3d, makeNet } from "../src/model.js";

beforeAll(async () => {
  await initBackend();
});

function randInput(batch: number, time: number, vocab: number, seed: number): tf.Tensor3D {
  return tf.randomNormal([batch, time, vocab], 0, 1, "float32", seed) as tf.Tensor3D;
}

function logitsOf(net: SequenceNet, x: tf.Tensor3D): number[][][] {
  return tf.tidy(() => net.forward(x, false)).arraySync() as number[][][];
}

describe.each([
  ["lstm", 8],
  ["transformer", 18],
] as const)("%s net", (kind, nVars) => {
  it("maps [batch, time, vocab] to logits of the same frame", () => {
    const net = makeNet(kind, 4, 0);
    const x = randInput(3, 6, 4, 21);
    const y = tf.tidy(() => net.forward(x, false));
    expect(y.shape).toEqual([3, 6, 4]);
    expect(net.trainable).toHaveLength(nVars);
    tf.dispose([x, y]);
    net.dispose();
  });

  it("is deterministic per seed and varies across seeds", () => {
    const x = randInput(2, 5, 3, 22);
    const a = makeNet(kind, 3, 7);
    const b = makeNet(kind, 3, 7);
    const c = makeNet(kind, 3, 8);
    const ya = logitsOf(a, x).flat(2);
    const yb = logitsOf(b, x).flat(2);
    const yc = logitsOf(c, x).flat(2);
    expect(ya).toEqual(yb);
    expect(ya).not.toEqual(yc);
    x.dispose();
    for (const n of [a, b, c]) n.dispose();
  });

  it("is causal: future inputs cannot move earlier logits", () => {
    const net = makeNet(kind, 3, 1);
    const base = randInput(1, 6, 3, 23);
    // perturb only the final timestep
    const bump = tf.tidy(() => {
      const delta = tf.buffer([1, 6, 3]);
      delta.set(5, 0, 5, 1);
      return base.add(delta.toTensor()) as tf.Tensor3D;
    });
    const ya = logitsOf(net, base);
    const yb = logitsOf(net, bump);
    for (let t = 0; t < 5; t++) {
      for (let v = 0; v < 3; v++) {
        expect(yb[0][t][v]).toBeCloseTo(ya[0][t][v], 5);
      }
    }
    expect(ya[0][5]).not.toEqual(yb[0][5]);
    tf.dispose([base, bump]);
    net.dispose();
  });

  it("releases every tensor on dispose", () => {
    const before = tf.memory().numTensors;
    const net = makeNet(kind, 3, 2);
    const x = randInput(2, 4, 3, 24);
    const y = tf.tidy(() => net.forward(x, true));
    tf.dispose([x, y]);
    net.dispose();
    expect(tf.memory().numTensors).toBe(before);
  });
});

describe("makeNet", () => {
  it("requires room for stop plus one activity", () => {
    expect(() => makeNet("lstm", 1, 0)).toThrow(/vocabulary must hold stop plus an activity/);
    expect(() => makeNet("transformer", 0, 0)).toThrow(RangeError);
  });

  it("reports identifying hyperparameters", () => {
    const l = new LstmNet(5, 0);
    const t = new TransformerNet(5, 0);
    expect(l.describe()).toEqual({ kind: "lstm", layers: 2, hidden: 128 });
    expect(t.describe()).toEqual({ kind: "transformer", layers: 1, heads: 1, d_model: 5, ffn: 20 });
    l.dispose();
    t.dispose();
  });
});

describe("dense3d", () => {
  it("applies the same affine map at every position", () => {
    const x = tf.tensor3d([[[1, 0], [0, 2]]]);
    const w = tf.tensor2d([[1, 2, 3], [4, 5, 6]]);
    const b = tf.tensor1d([0.5, 0.5, 0.5]);
    const y = dense3d(x, w, b).arraySync() as number[][][];
    expect(y[0][0]).toEqual([1.5, 2.5, 3.5]);
    expect(y[0][1]).toEqual([8.5, 10.5, 12.5]);
    tf.dispose([x, w, b]);
  });
});
