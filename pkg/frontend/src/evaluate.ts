import * as tf from "@tensorflow/tfjs";

import { SequenceNet } from "./model.js";
import { EvalReport, latencySummary } from "./report.js";
import { PAD } from "./windows.js";

/** Argmax with ties broken toward the lowest token id, stop id 0 first. */
export function argmaxLowest(scores: Float32Array | number[]): number {
  let bestId = 0;
  let bestScore = -Infinity;
  for (let i = 0; i < scores.length; i++) {
    if (scores[i] > bestScore) {
      bestScore = scores[i];
      bestId = i;
    }
  }
  return bestId;
}

export interface ScoreResult {
  nEvents: number;
  nCorrect: number;
  predUs: number[];
}

function encodeOne(windowTokens: number[], vocabSize: number): tf.Tensor3D {
  const buf = tf.buffer([1, windowTokens.length, vocabSize]);
  windowTokens.forEach((tok, j) => {
    if (tok !== PAD) buf.set(1, 0, j, tok);
  });
  return buf.toTensor() as tf.Tensor3D;
}

/**
 * Frozen scoring over held-out cases: no training happens here. Every event
 * of every case is a prediction opportunity, including the first event
 * (empty history) and the closing stop. Windowed models see the last k
 * events left-padded; full models see the whole history behind a
 * start-of-case position. Each prediction is timed individually.
 */
export function scoreCases(net: SequenceNet, cases: number[][],
                           k: number | null): ScoreResult {
  let nEvents = 0;
  let nCorrect = 0;
  const predUs: number[] = [];

  for (const tokens of cases) {
    for (let t = 0; t <= tokens.length; t++) {
      const target = t < tokens.length ? tokens[t] : 0;
      const start = process.hrtime.bigint();
      let windowTokens: number[];
      if (k === null) {
        windowTokens = [PAD, ...tokens.slice(0, t)];
      } else {
        const ctx = tokens.slice(Math.max(0, t - k), t);
        windowTokens = new Array<number>(k - ctx.length).fill(PAD).concat(ctx);
      }
      const xs = encodeOne(windowTokens, net.vocabSize);
      const logits = tf.tidy(() => {
        const out = net.forward(xs, false);
        const time = out.shape[1];
        return out.slice([0, time - 1, 0], [1, 1, -1]).squeeze();
      });
      const predicted = argmaxLowest(logits.dataSync() as Float32Array);
      predUs.push(Number(process.hrtime.bigint() - start) / 1e3);
      tf.dispose([xs, logits]);
      nEvents += 1;
      if (predicted === target) nCorrect += 1;
    }
  }
  return { nEvents, nCorrect, predUs };
}

/** Softmax of final-position logits for one history; probabilities sum to 1. */
export function predictProba(net: SequenceNet, history: number[],
                             k: number | null): Float32Array {
  const windowTokens = k === null
    ? [PAD, ...history]
    : new Array<number>(Math.max(0, k - history.length)).fill(PAD)
        .concat(history.slice(Math.max(0, history.length - k)));
  const xs = encodeOne(windowTokens, net.vocabSize);
  const probs = tf.tidy(() => {
    const out = net.forward(xs, false);
    const time = out.shape[1];
    return tf.softmax(out.slice([0, time - 1, 0], [1, 1, -1]).squeeze());
  });
  const data = probs.dataSync() as Float32Array;
  tf.dispose([xs, probs]);
  return data;
}

export interface ReportArgs {
  modelName: string;
  datasetName: string;
  score: ScoreResult;
  config: Record<string, unknown>;
}

/** Offline protocol: per-event train latencies do not exist, so they are zero;
    wall-clock training time travels in the config echo instead. */
export function buildReport(args: ReportArgs): EvalReport {
  const pred = latencySummary(args.score.predUs);
  return {
    model_name: args.modelName,
    dataset_name: args.datasetName,
    n_events: args.score.nEvents,
    n_correct: args.score.nCorrect,
    accuracy: args.score.nEvents === 0 ? 0 : (100 * args.score.nCorrect) / args.score.nEvents,
    pred_us_mean: pred.mean,
    pred_us_p50: pred.p50,
    pred_us_p99: pred.p99,
    train_us_mean: 0,
    train_us_p50: 0,
    train_us_p99: 0,
    config: args.config,
  };
}
