import * as tf from "@tensorflow/tfjs";

import { mulberry32, shuffle } from "./backend.js";
import { SequenceNet } from "./model.js";
import { PAD, expandCases, fullSequence } from "./windows.js";

export interface TrainConfig {
  learningRate: number;
  batchSize: number;
  epochs: number;
  /** epochs without a validation-accuracy improvement before stopping */
  patience: number;
  clipNorm: number;
  seed: number;
}

export const DEFAULT_TRAIN: TrainConfig = {
  learningRate: 1e-3,
  batchSize: 8,
  epochs: 20,
  patience: 3,
  clipNorm: 1.0,
  seed: 0,
};

export interface TrainResult {
  epochsRun: number;
  earlyStopped: boolean;
  bestValAccuracy: number;
  valAccuracyByEpoch: number[];
  trainSeconds: number;
}

/** One-hot [n, k, vocab]; PAD rows stay all-zero. */
export function encodeWindows(windows: number[][], vocabSize: number): tf.Tensor3D {
  const k = windows[0].length;
  const buf = tf.buffer([windows.length, k, vocabSize]);
  windows.forEach((w, i) => {
    w.forEach((tok, j) => {
      if (tok !== PAD) buf.set(1, i, j, tok);
    });
  });
  return buf.toTensor() as tf.Tensor3D;
}

function clipByGlobalNorm(grads: tf.Tensor[], maxNorm: number): tf.Tensor[] {
  return tf.tidy(() => {
    const norm = tf.sqrt(
      grads.map((g) => g.square().sum()).reduce((a, b) => a.add(b)));
    const scale = tf.minimum(1, tf.div(maxNorm, norm.add(1e-12)));
    return grads.map((g) => g.mul(scale));
  });
}

function applyStep(net: SequenceNet, optimizer: tf.Optimizer, clipNorm: number,
                   lossFn: () => tf.Scalar): number {
  const { value, grads } = tf.variableGrads(lossFn, net.trainable);
  const ordered = net.trainable.map((v) => grads[v.name]);
  const clipped = clipByGlobalNorm(ordered, clipNorm);
  const named: tf.NamedTensorMap = {};
  net.trainable.forEach((v, i) => {
    named[v.name] = clipped[i];
  });
  optimizer.applyGradients(named);
  const loss = value.dataSync()[0];
  tf.dispose(value);
  tf.dispose(grads);
  tf.dispose(clipped);
  return loss;
}

/** Accuracy of final-position argmax over windowed samples, batched. */
export function windowedAccuracy(net: SequenceNet, windows: number[][], targets: number[],
                                 batch = 256): number {
  let correct = 0;
  for (let s = 0; s < windows.length; s += batch) {
    const xs = encodeWindows(windows.slice(s, s + batch), net.vocabSize);
    const ys = targets.slice(s, s + batch);
    const pred = tf.tidy(() => {
      const logits = net.forward(xs, false);
      const time = logits.shape[1];
      return logits.slice([0, time - 1, 0], [-1, 1, -1]).squeeze([1]).argMax(-1);
    });
    const got = pred.dataSync();
    for (let i = 0; i < ys.length; i++) if (got[i] === ys[i]) correct += 1;
    tf.dispose([xs, pred]);
  }
  return windows.length === 0 ? 0 : correct / windows.length;
}

/**
 * Windowed training: all prefixes of every train case, loss at the final
 * timestep only. Early stopping tracks accuracy over the expanded
 * validation prefixes with the configured patience; weights are whatever
 * the last executed epoch left behind.
 */
export function trainWindowed(net: SequenceNet, trainCases: number[][], valCases: number[][],
                              k: number, cfg: TrainConfig = DEFAULT_TRAIN): TrainResult {
  const { windows, targets } = expandCases(trainCases, k);
  const val = expandCases(valCases, k);
  const optimizer = tf.train.adam(cfg.learningRate);
  const rng = mulberry32(cfg.seed * 7919 + 1);
  const idx = windows.map((_, i) => i);

  const t0 = process.hrtime.bigint();
  const valCurve: number[] = [];
  let best = -Infinity;
  let wait = 0;
  let epochsRun = 0;
  let earlyStopped = false;

  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    epochsRun = epoch + 1;
    shuffle(idx, rng);
    for (let s = 0; s < idx.length; s += cfg.batchSize) {
      const sel = idx.slice(s, s + cfg.batchSize);
      const xs = encodeWindows(sel.map((i) => windows[i]), net.vocabSize);
      const ys = tf.oneHot(tf.tensor1d(sel.map((i) => targets[i]), "int32"), net.vocabSize);
      applyStep(net, optimizer, cfg.clipNorm, () => tf.tidy(() => {
        const logits = net.forward(xs, true);
        const time = logits.shape[1];
        const last = logits.slice([0, time - 1, 0], [-1, 1, -1]).squeeze([1]);
        return tf.losses.softmaxCrossEntropy(ys, last).asScalar();
      }));
      tf.dispose([xs, ys]);
    }
    const valAcc = windowedAccuracy(net, val.windows, val.targets);
    valCurve.push(valAcc);
    if (valAcc > best) {
      best = valAcc;
      wait = 0;
    } else {
      wait += 1;
      if (wait >= cfg.patience) {
        earlyStopped = true;
        break;
      }
    }
  }
  optimizer.dispose();
  return {
    epochsRun,
    earlyStopped,
    bestValAccuracy: best,
    valAccuracyByEpoch: valCurve,
    trainSeconds: Number(process.hrtime.bigint() - t0) / 1e9,
  };
}

interface FullBatch {
  xs: tf.Tensor3D;     // [b, maxT, vocab], start rows and tail padding all-zero
  ys: tf.Tensor2D;     // one-hot targets flattened later
  mask: tf.Tensor2D;   // [b, maxT], 1 at real positions
  targets: number[][];
}

function encodeFullBatch(cases: number[][], vocabSize: number): FullBatch {
  const seqs = cases.map(fullSequence);
  const maxT = Math.max(...seqs.map((s) => s.inputs.length));
  const xb = tf.buffer([cases.length, maxT, vocabSize]);
  const mb = tf.buffer([cases.length, maxT]);
  const yFlat = new Int32Array(cases.length * maxT);
  seqs.forEach((s, i) => {
    s.inputs.forEach((tok, t) => {
      if (tok !== PAD) xb.set(1, i, t, tok);
    });
    s.targets.forEach((tok, t) => {
      mb.set(1, i, t);
      yFlat[i * maxT + t] = tok;
    });
  });
  const ys = tf.oneHot(tf.tensor1d(yFlat, "int32"), vocabSize) as tf.Tensor2D;
  return {
    xs: xb.toTensor() as tf.Tensor3D,
    ys,
    mask: mb.toTensor() as tf.Tensor2D,
    targets: seqs.map((s) => s.targets),
  };
}

/** Mean accuracy over every real position of every case, full-sequence mode. */
export function fullAccuracy(net: SequenceNet, cases: number[][], batch = 16): number {
  let correct = 0;
  let total = 0;
  for (let s = 0; s < cases.length; s += batch) {
    const group = cases.slice(s, s + batch);
    const enc = encodeFullBatch(group, net.vocabSize);
    const pred = tf.tidy(() => net.forward(enc.xs, false).argMax(-1));
    const got = pred.dataSync();
    const maxT = enc.xs.shape[1];
    enc.targets.forEach((tgt, i) => {
      tgt.forEach((tok, t) => {
        total += 1;
        if (got[i * maxT + t] === tok) correct += 1;
      });
    });
    tf.dispose([enc.xs, enc.ys, enc.mask, pred]);
  }
  return total === 0 ? 0 : correct / total;
}

/**
 * Full-sequence training: batches of whole cases right-padded to the batch
 * maximum, parallel next-token loss masked to real positions.
 */
export function trainFull(net: SequenceNet, trainCases: number[][], valCases: number[][],
                          cfg: TrainConfig = DEFAULT_TRAIN): TrainResult {
  const optimizer = tf.train.adam(cfg.learningRate);
  const rng = mulberry32(cfg.seed * 7919 + 2);
  const order = trainCases.map((_, i) => i);

  const t0 = process.hrtime.bigint();
  const valCurve: number[] = [];
  let best = -Infinity;
  let wait = 0;
  let epochsRun = 0;
  let earlyStopped = false;

  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    epochsRun = epoch + 1;
    shuffle(order, rng);
    for (let s = 0; s < order.length; s += cfg.batchSize) {
      const group = order.slice(s, s + cfg.batchSize).map((i) => trainCases[i]);
      const enc = encodeFullBatch(group, net.vocabSize);
      applyStep(net, optimizer, cfg.clipNorm, () => tf.tidy(() => {
        const logits = net.forward(enc.xs, true);
        const [b, time, v] = logits.shape;
        const logp = tf.logSoftmax(logits.reshape([b * time, v]));
        const ce = tf.neg(tf.sum(logp.mul(enc.ys), -1)).reshape([b, time]);
        return ce.mul(enc.mask).sum().div(enc.mask.sum()).asScalar();
      }));
      tf.dispose([enc.xs, enc.ys, enc.mask]);
    }
    const valAcc = fullAccuracy(net, valCases);
    valCurve.push(valAcc);
    if (valAcc > best) {
      best = valAcc;
      wait = 0;
    } else {
      wait += 1;
      if (wait >= cfg.patience) {
        earlyStopped = true;
        break;
      }
    }
  }
  optimizer.dispose();
  return {
    epochsRun,
    earlyStopped,
    bestValAccuracy: best,
    valAccuracyByEpoch: valCurve,
    trainSeconds: Number(process.hrtime.bigint() - t0) / 1e9,
  };
}
