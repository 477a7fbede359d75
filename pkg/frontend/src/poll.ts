/** Interval polling with stale-response protection.
 *
 * Responses resolve out of order on slow networks; each request gets a
 * sequence number and anything older than the latest applied response is
 * dropped instead of overwriting fresher data.
 */

export class LatestOnly<T> {
  private issued = 0;
  private applied = 0;

  async run(work: () => Promise<T>): Promise<T | null> {
    const seq = ++this.issued;
    const result = await work();
    if (seq < this.applied) return null; // a newer response already landed
    this.applied = seq;
    return result;
  }
}

export interface PollerHandle {
  stop(): void;
  tick(): Promise<void>;
}

export function startPolling(
  work: () => Promise<void>,
  intervalMs: number,
  schedule: typeof setInterval = setInterval,
  cancel: typeof clearInterval = clearInterval,
): PollerHandle {
  const tick = async () => {
    try {
      await work();
    } catch {
      // surfaced by the page as a banner; polling keeps going
    }
  };
  const timer = schedule(tick, intervalMs);
  void tick();
  return {
    stop: () => cancel(timer),
    tick,
  };
}
