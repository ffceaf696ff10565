export { STOP, Vocabulary } from "./vocab.js";
export {
  CaseData, LogFormatError, loadLog, readCsv, readJsonl,
  vocabOf, encodeCases, splitCases,
} from "./log.js";
export { PAD, prefixExpand, expandCases, fullSequence } from "./windows.js";
export { initBackend, mulberry32, shuffle } from "./backend.js";
export { RopeTable } from "./rope.js";
export {
  ModelKind, SequenceNet, LstmNet, TransformerNet, makeNet,
  dense3d, LSTM_HIDDEN, FFN_FACTOR,
} from "./model.js";
export {
  TrainConfig, TrainResult, DEFAULT_TRAIN,
  trainWindowed, trainFull, windowedAccuracy, fullAccuracy, encodeWindows,
} from "./train.js";
export {
  argmaxLowest, scoreCases, predictProba, buildReport, ScoreResult,
} from "./evaluate.js";
export {
  EvalReport, CSV_FIELDS, percentile, latencySummary, reportsToJson,
} from "./report.js";
export {
  ModelSpec, SpecError, DEFAULT_WINDOW, parseModelSpec, modelName,
  splitLog, runEval, RunOptions, SplitData,
} from "./run.js";
export { parseWindowRange, loadTrainConfig, UsageError } from "./cli.js";
