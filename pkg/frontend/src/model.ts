import * as tf from "@tensorflow/tfjs";

import { RopeTable } from "./rope.js";

export type ModelKind = "lstm" | "transformer";

export const LSTM_HIDDEN = 128;
export const FFN_FACTOR = 4;

/**
 * A next-token network over one-hot activity sequences.
 *
 * forward() returns logits at every position [batch, time, vocab]; the
 * caller decides which positions carry loss (final timestep in windowed
 * mode, every non-padding position in full mode).
 */
export interface SequenceNet {
  readonly kind: ModelKind;
  readonly vocabSize: number;
  readonly trainable: tf.Variable[];
  forward(x: tf.Tensor3D, training: boolean): tf.Tensor3D;
  /** Model-identifying hyperparameters for report config echoes. */
  describe(): Record<string, unknown>;
  dispose(): void;
}

/** Per-position linear layer. tfjs matMul gradients break when a 2D weight
    broadcasts against a 3D activation, so flatten time into the batch. */
export function dense3d(x: tf.Tensor3D, w: tf.Tensor2D, b: tf.Tensor1D): tf.Tensor3D {
  const [batch, time, dim] = x.shape;
  return x.reshape([batch * time, dim]).matMul(w).add(b)
    .reshape([batch, time, w.shape[1]]) as tf.Tensor3D;
}

// uniform(-1/sqrt(fan), 1/sqrt(fan)): the standard recurrent/linear default
function uniformInit(fan: number, seed: number): ReturnType<typeof tf.initializers.randomUniform> {
  const bound = 1 / Math.sqrt(fan);
  return tf.initializers.randomUniform({ minval: -bound, maxval: bound, seed });
}

// tidy so the initializers' staging tensors do not outlive variable creation
function uniformVar(shape: number[], fan: number, seed: number): tf.Variable {
  return tf.tidy(() => tf.variable(uniformInit(fan, seed).apply(shape)));
}

function xavierVar(shape: number[], seed: number): tf.Variable {
  return tf.tidy(() => tf.variable(tf.initializers.glorotUniform({ seed }).apply(shape)));
}

/**
 * Two stacked LSTM layers (hidden size 128) and a linear head mapping to
 * vocabulary size. Layers come from tfjs; only the head is hand-held so the
 * custom training loop sees one flat variable list.
 */
export class LstmNet implements SequenceNet {
  readonly kind: ModelKind = "lstm";
  readonly vocabSize: number;
  readonly hidden: number;
  readonly trainable: tf.Variable[];
  private l1: tf.layers.Layer;
  private l2: tf.layers.Layer;
  private wout: tf.Variable;
  private bout: tf.Variable;

  constructor(vocabSize: number, seed: number, hidden = LSTM_HIDDEN) {
    this.vocabSize = vocabSize;
    this.hidden = hidden;
    const lstmArgs = (s: number, fanIn: number) => ({
      units: hidden,
      returnSequences: true,
      kernelInitializer: uniformInit(fanIn, s),
      recurrentInitializer: uniformInit(hidden, s + 1),
      biasInitializer: uniformInit(hidden, s + 2),
      unitForgetBias: false,
    });
    this.l1 = tf.layers.lstm(lstmArgs(seed * 1000 + 1, vocabSize));
    this.l2 = tf.layers.lstm(lstmArgs(seed * 1000 + 4, hidden));
    // build through apply: RNN.build() alone leaves the layer marked unbuilt,
    // so the first real apply would re-create every cell weight
    tf.tidy(() => { this.l2.apply(this.l1.apply(tf.zeros([1, 1, vocabSize]))); });
    this.wout = uniformVar([hidden, vocabSize], hidden, seed * 1000 + 7);
    this.bout = uniformVar([vocabSize], hidden, seed * 1000 + 8);
    // LayerVariable types .val as protected, but it is the live tf.Variable
    // and the only handle that lets variableGrads see the layer weights
    const liveVars = (layer: tf.layers.Layer) =>
      layer.trainableWeights.map((w) => (w as unknown as { val: tf.Variable }).val);
    this.trainable = [...liveVars(this.l1), ...liveVars(this.l2), this.wout, this.bout];
  }

  forward(x: tf.Tensor3D): tf.Tensor3D {
    return tf.tidy(() => {
      const h1 = this.l1.apply(x) as tf.Tensor3D;
      const h2 = this.l2.apply(h1) as tf.Tensor3D;
      return dense3d(h2, this.wout as tf.Tensor2D, this.bout as tf.Tensor1D);
    });
  }

  describe(): Record<string, unknown> {
    return { kind: this.kind, layers: 2, hidden: this.hidden };
  }

  dispose(): void {
    this.l1.dispose();
    this.l2.dispose();
    this.wout.dispose();
    this.bout.dispose();
  }
}

/**
 * Single-layer, single-head causal encoder with rotary positional
 * embeddings on queries and keys, model dimension equal to the vocabulary
 * size, post-LN residual blocks, and a linear head to vocabulary size.
 * One-hot inputs enter the block directly; there is no embedding.
 */
export class TransformerNet implements SequenceNet {
  readonly kind: ModelKind = "transformer";
  readonly vocabSize: number;
  readonly ffnDim: number;
  readonly trainable: tf.Variable[];
  private rope: RopeTable;
  private masks = new Map<number, tf.Tensor2D>();
  private w: Record<string, tf.Variable>;

  constructor(vocabSize: number, seed: number, ffnFactor = FFN_FACTOR) {
    this.vocabSize = vocabSize;
    this.ffnDim = ffnFactor * vocabSize;
    this.rope = new RopeTable(vocabSize);
    const d = vocabSize;
    const s = seed * 1000;
    this.w = tf.tidy(() => ({
      wq: xavierVar([d, d], s + 11), bq: tf.variable(tf.zeros([d])),
      wk: xavierVar([d, d], s + 12), bk: tf.variable(tf.zeros([d])),
      wv: xavierVar([d, d], s + 13), bv: tf.variable(tf.zeros([d])),
      wo: xavierVar([d, d], s + 14), bo: tf.variable(tf.zeros([d])),
      g1: tf.variable(tf.ones([d])), c1: tf.variable(tf.zeros([d])),
      w1: uniformVar([d, this.ffnDim], d, s + 15), b1: tf.variable(tf.zeros([this.ffnDim])),
      w2: uniformVar([this.ffnDim, d], this.ffnDim, s + 16), b2: tf.variable(tf.zeros([d])),
      g2: tf.variable(tf.ones([d])), c2: tf.variable(tf.zeros([d])),
      wout: uniformVar([d, d], d, s + 17), bout: tf.variable(tf.zeros([d])),
    }));
    this.trainable = Object.values(this.w);
  }

  // strictly lower-triangular -1e9 additive mask, cached per sequence length;
  // keep: first use happens inside forward()'s tidy
  private causalMask(time: number): tf.Tensor2D {
    let m = this.masks.get(time);
    if (m === undefined) {
      m = tf.keep(tf.tidy(() =>
        tf.linalg.bandPart(tf.ones([time, time]), -1, 0).sub(1).mul(1e9)) as tf.Tensor2D);
      this.masks.set(time, m);
    }
    return m;
  }

  forward(x: tf.Tensor3D): tf.Tensor3D {
    const w = this.w;
    const d = this.vocabSize;
    return tf.tidy(() => {
      const q = this.rope.apply(dense3d(x, w.wq as tf.Tensor2D, w.bq as tf.Tensor1D));
      const k = this.rope.apply(dense3d(x, w.wk as tf.Tensor2D, w.bk as tf.Tensor1D));
      const v = dense3d(x, w.wv as tf.Tensor2D, w.bv as tf.Tensor1D);
      const time = x.shape[1];
      const scores = tf.matMul(q, k, false, true).div(Math.sqrt(d)).add(this.causalMask(time));
      const ctx = tf.softmax(scores).matMul(v);
      const att = dense3d(ctx as tf.Tensor3D, w.wo as tf.Tensor2D, w.bo as tf.Tensor1D);
      let h = layerNorm(x.add(att) as tf.Tensor3D, w.g1, w.c1);
      const f = dense3d(
        dense3d(h, w.w1 as tf.Tensor2D, w.b1 as tf.Tensor1D).relu() as tf.Tensor3D,
        w.w2 as tf.Tensor2D, w.b2 as tf.Tensor1D);
      h = layerNorm(h.add(f) as tf.Tensor3D, w.g2, w.c2);
      return dense3d(h, w.wout as tf.Tensor2D, w.bout as tf.Tensor1D);
    });
  }

  describe(): Record<string, unknown> {
    return { kind: this.kind, layers: 1, heads: 1, d_model: this.vocabSize, ffn: this.ffnDim };
  }

  dispose(): void {
    for (const v of this.trainable) v.dispose();
    for (const m of this.masks.values()) m.dispose();
    this.masks.clear();
    this.rope.dispose();
  }
}

function layerNorm(x: tf.Tensor3D, gain: tf.Variable, bias: tf.Variable): tf.Tensor3D {
  const mean = x.mean(-1, true);
  const centered = x.sub(mean);
  const variance = centered.square().mean(-1, true);
  return centered.div(variance.add(1e-5).sqrt()).mul(gain).add(bias) as tf.Tensor3D;
}

export function makeNet(kind: ModelKind, vocabSize: number, seed: number): SequenceNet {
  if (vocabSize < 2) {
    throw new RangeError(`vocabulary must hold stop plus an activity, got size ${vocabSize}`);
  }
  return kind === "lstm" ? new LstmNet(vocabSize, seed) : new TransformerNet(vocabSize, seed);
}
