/**
 * Evaluation report with the shared cross-tool JSON schema: one object per
 * model run, accuracy in percent, latencies in microseconds.
 */
export interface EvalReport {
  model_name: string;
  dataset_name: string;
  n_events: number;
  n_correct: number;
  accuracy: number;
  pred_us_mean: number;
  pred_us_p50: number;
  pred_us_p99: number;
  train_us_mean: number;
  train_us_p50: number;
  train_us_p99: number;
  config: Record<string, unknown>;
}

export const CSV_FIELDS = [
  "model_name", "dataset_name", "n_events", "n_correct", "accuracy",
  "pred_us_mean", "pred_us_p50", "pred_us_p99",
  "train_us_mean", "train_us_p50", "train_us_p99",
] as const;

/** Linear-interpolation percentile (the numpy default), q in [0, 100]. */
export function percentile(values: number[], q: number): number {
  if (values.length === 0) throw new RangeError("percentile of empty list");
  const sorted = [...values].sort((a, b) => a - b);
  const pos = ((sorted.length - 1) * q) / 100;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  if (lo === hi) return sorted[lo];
  return sorted[lo] * (hi - pos) + sorted[hi] * (pos - lo);
}

export interface LatencySummary {
  mean: number;
  p50: number;
  p99: number;
}

export function latencySummary(us: number[]): LatencySummary {
  if (us.length === 0) return { mean: 0, p50: 0, p99: 0 };
  const mean = us.reduce((a, b) => a + b, 0) / us.length;
  return { mean, p50: percentile(us, 50), p99: percentile(us, 99) };
}

function sortKeysDeep(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortKeysDeep);
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
    return Object.fromEntries(entries.map(([k, v]) => [k, sortKeysDeep(v)]));
  }
  return value;
}

/** Reports serialize with sorted keys so files diff cleanly across tools.
    A single report becomes a bare object, several become a list, matching
    the reference evaluator's files. */
export function reportsToJson(reports: EvalReport[], indent = 2): string {
  const payload = reports.length === 1 ? reports[0] : reports;
  return JSON.stringify(sortKeysDeep(payload), null, indent);
}
