import path from "node:path";
import { createRequire } from "node:module";

import * as tf from "@tensorflow/tfjs";
import { setWasmPaths } from "@tensorflow/tfjs-backend-wasm";

let ready: Promise<string> | null = null;

/**
 * Select the fastest available tfjs backend, once per process.
 *
 * The wasm backend runs the 2x128 LSTM training step ~4x faster than the
 * pure-JS cpu backend with identical numerics; fall back to cpu if the
 * wasm binary cannot be located.
 */
export function initBackend(): Promise<string> {
  if (ready === null) {
    ready = (async () => {
      try {
        const require = createRequire(import.meta.url);
        const entry = require.resolve("@tensorflow/tfjs-backend-wasm");
        setWasmPaths(path.dirname(entry) + path.sep);
        await tf.setBackend("wasm");
      } catch {
        await tf.setBackend("cpu");
      }
      await tf.ready();
      return tf.getBackend();
    })();
  }
  return ready;
}

/** Deterministic 32-bit PRNG for shuffles; tfjs initializers take their own seeds. */
export function mulberry32(seed: number): () => number {
  let a = seed | 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** In-place Fisher-Yates. */
export function shuffle<T>(arr: T[], rng: () => number): void {
  for (let i = arr.length - 1; i > 0; i--) {
    const j = Math.floor(rng() * (i + 1));
    [arr[i], arr[j]] = [arr[j], arr[i]];
  }
}
