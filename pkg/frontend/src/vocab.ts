/** Reserved end-of-case marker; never a real activity name. */
export const STOP = "__STOP__";

/**
 * Token ids for the activities of a log plus the stop marker.
 *
 * The stop marker always has id 0 so that argmax ties involving stop
 * resolve the same way on every dataset; activities get ids in first-seen
 * order after it. One-hot encodings use `size` as their dimension.
 */
export class Vocabulary {
  private ids = new Map<string, number>();
  private names: string[] = [];

  constructor(activities: Iterable<string> = []) {
    this.add(STOP);
    for (const a of activities) this.add(a);
  }

  /** Insert a token if new; returns its id either way. */
  add(name: string): number {
    const existing = this.ids.get(name);
    if (existing !== undefined) return existing;
    const id = this.names.length;
    this.ids.set(name, id);
    this.names.push(name);
    return id;
  }

  idOf(name: string): number | undefined {
    return this.ids.get(name);
  }

  nameOf(id: number): string {
    if (id < 0 || id >= this.names.length) {
      throw new RangeError(`no token with id ${id}`);
    }
    return this.names[id];
  }

  get size(): number {
    return this.names.length;
  }

  /** Activity names without the stop marker, in id order. */
  get activities(): string[] {
    return this.names.slice(1);
  }
}
