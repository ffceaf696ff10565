import { beforeAll, describe, expect, it } from "vitest";

import { initBackend } from "../src/backend.js";
import { argmaxLowest, buildReport, predictProba, scoreCases } from "../src/evaluate.js";
import { makeNet } from "../src/model.js";
import { CSV_FIELDS, latencySummary, percentile, reportsToJson } from "../src/report.js";
import { windowedAccuracy } from "../src/train.js";
import { expandCases } from "../src/windows.js";

beforeAll(async () => {
  await initBackend();
});

describe("argmaxLowest", () => {
  it("picks the maximum", () => {
    expect(argmaxLowest([0.1, 0.7, 0.2])).toBe(1);
  });

  it("breaks ties toward the lowest id", () => {
    expect(argmaxLowest([3, 1, 3, 3])).toBe(0);
    expect(argmaxLowest([1, 3, 3, 3])).toBe(1);
    expect(argmaxLowest(new Float32Array([2, 2]))).toBe(0);
  });

  it("handles negative scores", () => {
    expect(argmaxLowest([-5, -2, -9])).toBe(1);
  });
});

describe("percentile", () => {
  // the numpy linear-interpolation convention, checked against hand values
  it.each([
    [[1, 2, 3, 4], 50, 2.5],
    [[1, 2, 3, 4], 0, 1],
    [[1, 2, 3, 4], 100, 4],
    [[1, 2, 3, 4], 99, 3.97],
    [[5], 75, 5],
    [[4, 1, 3, 2], 25, 1.75],
  ])("percentile(%j, %d) = %d", (values, q, want) => {
    expect(percentile(values, q)).toBeCloseTo(want, 10);
  });

  it("rejects an empty list", () => {
    expect(() => percentile([], 50)).toThrow(/empty/);
  });
});

describe("latencySummary", () => {
  it("summarizes mean and percentiles", () => {
    const s = latencySummary([2, 4, 6, 8]);
    expect(s.mean).toBe(5);
    expect(s.p50).toBe(5);
    expect(s.p99).toBeCloseTo(7.94, 10);
  });

  it("is all zero with no samples", () => {
    expect(latencySummary([])).toEqual({ mean: 0, p50: 0, p99: 0 });
  });
});

describe("scoreCases", () => {
  const cases = [[1, 2, 1], [2, 2], [1]];

  it("scores every event plus one stop per case", () => {
    const net = makeNet("transformer", 3, 0);
    const result = scoreCases(net, cases, 4);
    expect(result.nEvents).toBe(4 + 3 + 2);
    expect(result.predUs).toHaveLength(result.nEvents);
    for (const us of result.predUs) expect(us).toBeGreaterThan(0);
    net.dispose();
  });

  it("agrees with windowedAccuracy over the same expansion", () => {
    const net = makeNet("transformer", 3, 3);
    const result = scoreCases(net, cases, 2);
    const { windows, targets } = expandCases(cases, 2);
    const acc = windowedAccuracy(net, windows, targets);
    expect(result.nCorrect / result.nEvents).toBeCloseTo(acc, 10);
    net.dispose();
  });

  it("supports full-history scoring with k = null", () => {
    const net = makeNet("lstm", 3, 0);
    const result = scoreCases(net, [[1, 2]], null);
    expect(result.nEvents).toBe(3);
    expect(result.nCorrect).toBeGreaterThanOrEqual(0);
    expect(result.nCorrect).toBeLessThanOrEqual(3);
    net.dispose();
  });
});

describe("predictProba", () => {
  it("returns a distribution over the vocabulary", () => {
    const net = makeNet("transformer", 4, 0);
    for (const k of [3, null]) {
      const p = predictProba(net, [1, 2, 3, 1], k);
      expect(p).toHaveLength(4);
      const sum = Array.from(p).reduce((a, b) => a + b, 0);
      expect(sum).toBeCloseTo(1, 6);
      for (const v of p) expect(v).toBeGreaterThanOrEqual(0);
    }
    net.dispose();
  });

  it("handles an empty history", () => {
    const net = makeNet("lstm", 2, 0);
    const p = predictProba(net, [], 4);
    expect(Array.from(p).reduce((a, b) => a + b, 0)).toBeCloseTo(1, 6);
    net.dispose();
  });
});

describe("buildReport", () => {
  const score = { nEvents: 8, nCorrect: 6, predUs: [1, 2, 3, 4, 5, 6, 7, 8] };

  it("carries the shared report schema", () => {
    const report = buildReport({
      modelName: "lstm(k=4)",
      datasetName: "toy.csv",
      score,
      config: { window: 4 },
    });
    expect(Object.keys(report).sort()).toEqual([...CSV_FIELDS, "config"].sort());
    expect(report.accuracy).toBe(75);
    expect(report.n_events).toBe(8);
    expect(report.n_correct).toBe(6);
    expect(report.pred_us_mean).toBe(4.5);
    expect(report.train_us_mean).toBe(0);
    expect(report.train_us_p50).toBe(0);
    expect(report.train_us_p99).toBe(0);
  });

  it("serializes with sorted keys at every level", () => {
    const report = buildReport({
      modelName: "m",
      datasetName: "d",
      score,
      config: { window: 4, batch_size: 8, seed: 0 },
    });
    const single = JSON.parse(reportsToJson([report]));
    expect(Array.isArray(single)).toBe(false);
    expect(Object.keys(single)).toEqual([...Object.keys(single)].sort());
    expect(Object.keys(single.config)).toEqual(["batch_size", "seed", "window"]);
    const pair = JSON.parse(reportsToJson([report, report]));
    expect(pair).toHaveLength(2);
    expect(Object.keys(pair[1])).toEqual(Object.keys(single));
  });
});
