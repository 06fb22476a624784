/**
 * FIFO serializer for user gestures: one gateway action in flight at a
 * time, later gestures queued in arrival order. Tasks that reject do
 * not poison the queue.
 */
export class ActionQueue {
  private tail: Promise<void> = Promise.resolve();

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    const run = this.tail.then(() => task());
    this.tail = run.then(
      () => undefined,
      () => undefined,
    );
    return run;
  }

  /** Resolves once every enqueued task so far has settled. */
  get idle(): Promise<void> {
    return this.tail;
  }
}
