import * as tf from "@tensorflow/tfjs";

/**
 * Rotary positional embedding over the last axis of [batch, time, dim]
 * activations, half-split pair layout: position p rotates (x[i], x[i+dim/2])
 * by p / base^(2i/dim). Odd dims leave the final feature unrotated, which
 * matters here because the model dimension equals the vocabulary size and
 * can be odd.
 *
 * Rotation depends only on position, so a left-padded window gives every
 * token the same encoding relative to the window end regardless of how much
 * real history precedes it.
 */
export class RopeTable {
  readonly dim: number;
  readonly base: number;
  private cos: tf.Tensor2D | null = null; // [maxLen, half]
  private sin: tf.Tensor2D | null = null;
  private maxLen = 0;

  constructor(dim: number, base = 10000) {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new RangeError(`dim must be a positive integer, got ${dim}`);
    }
    this.dim = dim;
    this.base = base;
  }

  get half(): number {
    return Math.floor(this.dim / 2);
  }

  private ensure(len: number): void {
    if (len <= this.maxLen) return;
    this.cos?.dispose();
    this.sin?.dispose();
    const half = this.half;
    const cos = tf.buffer([len, half]);
    const sin = tf.buffer([len, half]);
    for (let p = 0; p < len; p++) {
      for (let i = 0; i < half; i++) {
        const angle = p / Math.pow(this.base, (2 * i) / this.dim);
        cos.set(Math.cos(angle), p, i);
        sin.set(Math.sin(angle), p, i);
      }
    }
    // keep: ensure() may run inside a caller's tidy, which must not reap the cache
    this.cos = tf.keep(cos.toTensor() as tf.Tensor2D);
    this.sin = tf.keep(sin.toTensor() as tf.Tensor2D);
    this.maxLen = len;
  }

  /** Rotate x: [batch, time, dim] by each row's position. */
  apply(x: tf.Tensor3D): tf.Tensor3D {
    const [, time, dim] = x.shape;
    if (dim !== this.dim) {
      throw new RangeError(`expected last dim ${this.dim}, got ${dim}`);
    }
    const half = this.half;
    if (half === 0) return x.clone() as tf.Tensor3D; // dim 1: nothing to rotate
    this.ensure(time);
    return tf.tidy(() => {
      const cos = this.cos!.slice([0, 0], [time, half]);
      const sin = this.sin!.slice([0, 0], [time, half]);
      const x0 = x.slice([0, 0, 0], [-1, -1, half]);
      const x1 = x.slice([0, 0, half], [-1, -1, half]);
      const r0 = x0.mul(cos).sub(x1.mul(sin));
      const r1 = x0.mul(sin).add(x1.mul(cos));
      if (2 * half === dim) return tf.concat([r0, r1], -1) as tf.Tensor3D;
      const rest = x.slice([0, 0, 2 * half], [-1, -1, dim - 2 * half]);
      return tf.concat([r0, r1, rest], -1) as tf.Tensor3D;
    });
  }

  dispose(): void {
    this.cos?.dispose();
    this.sin?.dispose();
    this.cos = this.sin = null;
    this.maxLen = 0;
  }
}
