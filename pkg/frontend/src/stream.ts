import type { EventsDoc, StreamRecord } from './types.js';

export type FetchEvents = (from: number) => Promise<EventsDoc>;

/**
 * Ordered consumer of the session event stream. Delivery from the
 * gateway is at-least-once with strictly increasing sequence numbers,
 * so this feed deduplicates by seq, applies records in order, and on a
 * gap (dropped delivery) refetches from the last acknowledged record.
 * A failed fetch leaves lastSeq untouched; the next sync resumes where
 * the feed left off and loses nothing.
 */
export class EventFeed {
  lastSeq = 0;
  private inFlight: Promise<void> | null = null;
  private again = false;

  constructor(
    private readonly fetchEvents: FetchEvents,
    private readonly onRecord: (record: StreamRecord) => void,
  ) {}

  /** Pulls until caught up. Concurrent calls coalesce into one pull. */
  sync(): Promise<void> {
    if (this.inFlight) {
      this.again = true;
      return this.inFlight;
    }
    this.inFlight = this.pull().finally(() => {
      this.inFlight = null;
      if (this.again) {
        this.again = false;
        void this.sync();
      }
    });
    return this.inFlight;
  }

  private async pull(): Promise<void> {
    let doc = await this.fetchEvents(this.lastSeq + 1);
    for (let attempt = 0; ; attempt++) {
      const fresh = doc.records.filter((r) => r.seq > this.lastSeq);
      let gapAt = -1;
      for (let i = 0; i < fresh.length; i++) {
        const record = fresh[i]!;
        if (record.seq !== this.lastSeq + 1) {
          gapAt = i;
          break;
        }
        this.lastSeq = record.seq;
        this.onRecord(record);
      }
      if (gapAt === -1) {
        return;
      }
      if (attempt >= 3) {
        throw new Error(`event stream gap persists at seq ${this.lastSeq + 1}`);
      }
      doc = await this.fetchEvents(this.lastSeq + 1);
    }
  }
}
