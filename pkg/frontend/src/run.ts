import path from "node:path";

import { initBackend } from "./backend.js";
import { CaseData, encodeCases, loadLog, splitCases, vocabOf } from "./log.js";
import { makeNet, ModelKind } from "./model.js";
import { buildReport, scoreCases } from "./evaluate.js";
import { EvalReport } from "./report.js";
import { DEFAULT_TRAIN, TrainConfig, trainFull, trainWindowed } from "./train.js";

/** What to train: a model kind plus a context window, or full sequences. */
export interface ModelSpec {
  kind: ModelKind;
  /** window length k; null selects full-sequence (unbounded context) mode */
  k: number | null;
}

export const DEFAULT_WINDOW = 4;

export class SpecError extends Error {}

/**
 * Parse "lstm", "transformer:k=8", "lstm:6", "transformer:full".
 * The bare kind defaults to a window of 4 events.
 */
export function parseModelSpec(text: string): ModelSpec {
  const [head, ...rest] = text.split(":");
  if (head !== "lstm" && head !== "transformer") {
    throw new SpecError(`unknown model kind '${head}' in spec '${text}'; want lstm or transformer`);
  }
  if (rest.length === 0) return { kind: head, k: DEFAULT_WINDOW };
  if (rest.length > 1) {
    throw new SpecError(`too many ':' segments in model spec '${text}'`);
  }
  const arg = rest[0];
  if (arg === "full") return { kind: head, k: null };
  const raw = arg.startsWith("k=") ? arg.slice(2) : arg;
  const k = Number(raw);
  if (!Number.isInteger(k) || k < 1) {
    throw new SpecError(`bad window '${arg}' in model spec '${text}'; want k=N (N >= 1) or full`);
  }
  return { kind: head, k };
}

export function modelName(spec: ModelSpec): string {
  return spec.k === null ? `${spec.kind}(full)` : `${spec.kind}(k=${spec.k})`;
}

export interface RunOptions {
  train?: Partial<TrainConfig>;
  datasetName?: string;
}

export interface SplitData {
  vocabSize: number;
  trainCases: number[][];
  valCases: number[][];
  testCases: number[][];
}

/** In-order 70/15/15 case split over the encoded log. */
export function splitLog(cases: CaseData[]): SplitData {
  const vocab = vocabOf(cases);
  const encoded = encodeCases(cases, vocab);
  const [nTrain, nVal] = splitCases(cases.length);
  return {
    vocabSize: vocab.size,
    trainCases: encoded.slice(0, nTrain),
    valCases: encoded.slice(nTrain, nTrain + nVal),
    testCases: encoded.slice(nTrain + nVal),
  };
}

/**
 * Train one model on a log file's train split and score it frozen on the
 * test split. The whole pipeline for `eval`, one row of `sweep`, and the
 * acceptance checks.
 */
export async function runEval(spec: ModelSpec, inputPath: string,
                              opts: RunOptions = {}): Promise<EvalReport> {
  await initBackend();
  const cfg: TrainConfig = { ...DEFAULT_TRAIN, ...opts.train };
  const data = splitLog(loadLog(inputPath));
  const net = makeNet(spec.kind, data.vocabSize, cfg.seed);
  try {
    const result = spec.k === null
      ? trainFull(net, data.trainCases, data.valCases, cfg)
      : trainWindowed(net, data.trainCases, data.valCases, spec.k, cfg);
    const score = scoreCases(net, data.testCases, spec.k);
    const nTrainEvents = data.trainCases.reduce((a, c) => a + c.length + 1, 0);
    return buildReport({
      modelName: modelName(spec),
      datasetName: opts.datasetName ?? path.basename(inputPath),
      score,
      config: {
        ...net.describe(),
        window: spec.k,
        protocol: "split",
        n_train_events: nTrainEvents,
        learning_rate: cfg.learningRate,
        batch_size: cfg.batchSize,
        max_epochs: cfg.epochs,
        patience: cfg.patience,
        clip_norm: cfg.clipNorm,
        seed: cfg.seed,
        epochs_run: result.epochsRun,
        early_stopped: result.earlyStopped,
        best_val_accuracy: result.bestValAccuracy,
        train_seconds: result.trainSeconds,
      },
    });
  } finally {
    net.dispose();
  }
}
