#!/usr/bin/env node
import fs from "node:fs";

import Papa from "papaparse";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { LogFormatError } from "./log.js";
import { EvalReport, reportsToJson } from "./report.js";
import { ModelSpec, parseModelSpec, runEval, SpecError } from "./run.js";
import { TrainConfig } from "./train.js";

export class UsageError extends Error {}

/** "LO..HI" or a comma list, e.g. "2..6" or "2,4,8". */
export function parseWindowRange(text: string): number[] {
  const bad = () =>
    new UsageError(`bad window range '${text}', want 'LO..HI' or a comma list`);
  const t = text.trim();
  const parse = (s: string) => {
    const n = Number(s);
    if (!Number.isInteger(n) || s.trim() === "") throw bad();
    return n;
  };
  if (t.includes("..")) {
    const parts = t.split("..");
    if (parts.length !== 2) throw bad();
    const [lo, hi] = parts.map(parse);
    if (hi < lo) throw bad();
    return Array.from({ length: hi - lo + 1 }, (_, i) => lo + i);
  }
  return t.split(",").map(parse);
}

const CONFIG_KEYS: Record<string, keyof TrainConfig> = {
  learning_rate: "learningRate",
  batch_size: "batchSize",
  max_epochs: "epochs",
  patience: "patience",
  clip_norm: "clipNorm",
  seed: "seed",
};

/** JSON file of training overrides using the report config echo's key names. */
export function loadTrainConfig(configPath: string | undefined): Partial<TrainConfig> {
  if (!configPath) return {};
  let parsed: unknown;
  try {
    parsed = JSON.parse(fs.readFileSync(configPath, "utf-8"));
  } catch (e) {
    throw new UsageError(`cannot read config ${configPath}: ${(e as Error).message}`);
  }
  if (parsed === null || typeof parsed !== "object" || Array.isArray(parsed)) {
    throw new UsageError(`config ${configPath} must hold a JSON object`);
  }
  const out: Partial<TrainConfig> = {};
  for (const [key, value] of Object.entries(parsed)) {
    const mapped = CONFIG_KEYS[key];
    if (mapped === undefined) {
      throw new UsageError(
        `unknown config key '${key}'; valid keys: ${Object.keys(CONFIG_KEYS).join(", ")}`);
    }
    if (typeof value !== "number") {
      throw new UsageError(`config key '${key}' must be a number`);
    }
    out[mapped] = value;
  }
  return out;
}

function printTable(reports: EvalReport[]): void {
  const cols = ["model", "dataset", "events", "acc %", "pred us", "train s"];
  const widths = [32, 20, 8, 7, 9, 9];
  const line = (cells: string[]) =>
    cells.map((c, i) => (i === 0 ? c.padEnd(widths[i]) : c.padStart(widths[i]))).join(" ");
  console.log(line(cols));
  console.log("-".repeat(widths.reduce((a, b) => a + b) + widths.length - 1));
  for (const r of reports) {
    console.log(line([
      r.model_name,
      r.dataset_name,
      String(r.n_events),
      r.accuracy.toFixed(2),
      r.pred_us_mean.toFixed(2),
      Number(r.config.train_seconds ?? 0).toFixed(1),
    ]));
  }
}

interface EvalArgs {
  model: string[];
  input: string;
  out?: string;
  config?: string;
  seed: number;
  table: boolean;
}

async function cmdEval(args: EvalArgs): Promise<void> {
  const specs = args.model.map(parseModelSpec);
  const train = { ...loadTrainConfig(args.config), seed: args.seed };
  const reports: EvalReport[] = [];
  for (const spec of specs) {
    reports.push(await runEval(spec, args.input, { train }));
  }
  if (args.out) {
    fs.writeFileSync(args.out, reportsToJson(reports) + "\n");
  }
  if (args.table || !args.out) {
    printTable(reports);
  }
}

interface SweepArgs {
  model: string[];
  windows: string;
  input: string;
  out?: string;
  config?: string;
  seed: number;
}

async function cmdSweep(args: SweepArgs): Promise<void> {
  const kinds = args.model.map((m) => {
    const spec = parseModelSpec(m);
    if (m.includes(":")) {
      throw new UsageError(`sweep sets the window itself; drop ':' from '${m}'`);
    }
    return spec.kind;
  });
  const windows = parseWindowRange(args.windows);
  for (const w of windows) {
    if (w < 1) {
      throw new UsageError(`neural models need a window >= 1, got ${w}`);
    }
  }
  const train = { ...loadTrainConfig(args.config), seed: args.seed };
  const rows: Record<string, unknown>[] = [];
  for (const kind of kinds) {
    for (const k of windows) {
      const spec: ModelSpec = { kind, k };
      const report = await runEval(spec, args.input, { train });
      rows.push({
        model: report.model_name,
        window: k,
        accuracy: Number(report.accuracy.toFixed(4)),
        n_events: report.n_events,
        pred_us_mean: Number(report.pred_us_mean.toFixed(2)),
        train_us_mean: Number(report.train_us_mean.toFixed(2)),
      });
      console.error(`${report.model_name}: ${report.accuracy.toFixed(2)}%`);
    }
  }
  const csv = Papa.unparse(
    { fields: ["model", "window", "accuracy", "n_events", "pred_us_mean", "train_us_mean"],
      data: rows.map((r) => Object.values(r)) });
  if (args.out) {
    fs.writeFileSync(args.out, csv + "\n");
    console.log(`wrote ${args.out} (${rows.length} rows)`);
  } else {
    console.log(csv);
  }
}

export async function main(argv: string[]): Promise<number> {
  try {
    await yargs(argv)
      .scriptName("streamgram-neural")
      .usage("Neural next-activity baselines over event logs: train on the 70% case split, report frozen test accuracy.")
      .command<EvalArgs>(
        "eval", "Train and evaluate models on an event log",
        (y) => y
          .option("model", { type: "string", array: true, default: ["lstm"],
                             describe: "lstm | transformer, with :k=N or :full" })
          .option("input", { type: "string", demandOption: true, describe: "CSV or JSONL log" })
          .option("out", { type: "string", describe: "write EvalReport JSON here" })
          .option("config", { type: "string", describe: "JSON file of training overrides" })
          .option("seed", { type: "number", default: 0 })
          .option("table", { type: "boolean", default: false }),
        async (a) => { await cmdEval(a); })
      .command<SweepArgs>(
        "sweep", "Accuracy over a grid of window sizes",
        (y) => y
          .option("model", { type: "string", array: true, default: ["lstm"] })
          .option("windows", { type: "string", default: "2..6", describe: "'LO..HI' or comma list" })
          .option("input", { type: "string", demandOption: true })
          .option("out", { type: "string", describe: "write CSV here" })
          .option("config", { type: "string" })
          .option("seed", { type: "number", default: 0 }),
        async (a) => { await cmdSweep(a); })
      .demandCommand(1, "pick a command: eval or sweep")
      .strict()
      .fail((msg, err) => { throw err ?? new UsageError(msg); })
      .parseAsync();
    return 0;
  } catch (e) {
    if (e instanceof UsageError || e instanceof SpecError) {
      console.error(`Error: ${e.message}`);
      return 2;
    }
    // RangeErrors come from data-dependent guards (split size, vocabulary),
    // so they are file problems like the reference CLI's, not usage problems
    if (e instanceof LogFormatError || e instanceof RangeError ||
        (e as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`Error: ${e instanceof Error ? e.message : e}`);
      return 1;
    }
    throw e;
  }
}

const isDirectRun = process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isDirectRun) {
  main(hideBin(process.argv)).then((code) => { process.exitCode = code; });
}
