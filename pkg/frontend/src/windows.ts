/** Padding marker inside token windows; encodes to an all-zero one-hot row. */
export const PAD = -1;

export interface WindowedSamples {
  /** Each window has exactly k entries, PAD-filled on the left. */
  windows: number[][];
  /** Target token id per window; stop (id 0) closes every case. */
  targets: number[];
}

/**
 * Expand one case into fixed-window training samples.
 *
 * Every event is a prediction opportunity: the empty prefix (fully padded
 * window) predicts the first activity, and the final sample predicts stop.
 * Prefixes are truncated to the last k tokens and left-padded to length k,
 * so a case of T activities yields T + 1 samples.
 */
export function prefixExpand(tokens: number[], k: number): WindowedSamples {
  if (!Number.isInteger(k) || k < 1) {
    throw new RangeError(`window must be a positive integer, got ${k}`);
  }
  const windows: number[][] = [];
  const targets: number[] = [];
  for (let t = 0; t <= tokens.length; t++) {
    const ctx = tokens.slice(Math.max(0, t - k), t);
    windows.push(new Array<number>(k - ctx.length).fill(PAD).concat(ctx));
    targets.push(t < tokens.length ? tokens[t] : 0);
  }
  return { windows, targets };
}

/** prefixExpand over many cases, concatenated. */
export function expandCases(cases: number[][], k: number): WindowedSamples {
  const windows: number[][] = [];
  const targets: number[] = [];
  for (const tokens of cases) {
    const s = prefixExpand(tokens, k);
    windows.push(...s.windows);
    targets.push(...s.targets);
  }
  return { windows, targets };
}

export interface FullSequence {
  /** Position 0 is a start-of-case marker (PAD, all-zero input row). */
  inputs: number[];
  /** targets[t] is the token to predict at position t; last one is stop. */
  targets: number[];
}

/**
 * One full-sequence training sample per case: inputs [start, x1..xT],
 * targets [x1..xT, stop]. The loss applies at every position, matching
 * the windowed expansion's one-opportunity-per-event convention.
 */
export function fullSequence(tokens: number[]): FullSequence {
  return {
    inputs: [PAD, ...tokens],
    targets: [...tokens, 0],
  };
}
