import { describe, expect, it } from 'vitest';

import { EventFeed } from '../src/stream';
import type { EventsDoc, StreamRecord } from '../src/types';

function message(seq: number, text: string): StreamRecord {
  return { seq, type: 'message', text, channel: 'Status' };
}

function docWith(records: StreamRecord[], from: number): EventsDoc {
  const visible = records.filter((r) => r.seq >= from);
  const last = records[records.length - 1];
  return { v: 1, records: visible, next: last ? last.seq + 1 : 1 };
}

describe('event feed', () => {
  it('applies records once, in order, across repeated syncs', async () => {
    const records = [message(1, 'a'), message(2, 'b'), message(3, 'c')];
    const seen: number[] = [];
    const feed = new EventFeed(
      async (from) => docWith(records, from),
      (r) => seen.push(r.seq),
    );

    await feed.sync();
    await feed.sync();
    expect(seen).toEqual([1, 2, 3]);
    expect(feed.lastSeq).toBe(3);
  });

  it('resumes from the last acknowledged record as new ones appear', async () => {
    const records: StreamRecord[] = [message(1, 'a')];
    const seen: number[] = [];
    const calls: number[] = [];
    const feed = new EventFeed(
      async (from) => {
        calls.push(from);
        return docWith(records, from);
      },
      (r) => seen.push(r.seq),
    );

    await feed.sync();
    records.push(message(2, 'b'), message(3, 'c'));
    await feed.sync();

    expect(seen).toEqual([1, 2, 3]);
    expect(calls).toEqual([1, 2]);
  });

  it('refetches on a delivery gap and loses nothing', async () => {
    const full = [message(1, 'a'), message(2, 'b'), message(3, 'c'), message(4, 'd')];
    let dropMiddle = true;
    const seen: number[] = [];
    const calls: number[] = [];
    const feed = new EventFeed(
      async (from) => {
        calls.push(from);
        if (dropMiddle) {
          dropMiddle = false;
          return docWith(full.filter((r) => r.seq !== 3), from);
        }
        return docWith(full, from);
      },
      (r) => seen.push(r.seq),
    );

    await feed.sync();
    expect(seen).toEqual([1, 2, 3, 4]);
    expect(calls).toEqual([1, 3]);
  });

  it('keeps its position across a dropped connection', async () => {
    const records = [message(1, 'a'), message(2, 'b')];
    let failures = 1;
    const seen: number[] = [];
    const feed = new EventFeed(
      async (from) => {
        if (failures > 0) {
          failures -= 1;
          throw new TypeError('network down');
        }
        return docWith(records, from);
      },
      (r) => seen.push(r.seq),
    );

    await expect(feed.sync()).rejects.toThrow('network down');
    expect(feed.lastSeq).toBe(0);
    await feed.sync();
    expect(seen).toEqual([1, 2]);
  });

  it('fails loudly when a gap persists instead of skipping records', async () => {
    const gapped = [message(1, 'a'), message(3, 'c')];
    const feed = new EventFeed(
      async (from) => docWith(gapped.filter((r) => r.seq >= from), from),
      () => {},
    );

    await expect(feed.sync()).rejects.toThrow('gap persists');
    expect(feed.lastSeq).toBe(1);
  });

  it('coalesces concurrent syncs into one pull', async () => {
    const records = [message(1, 'a')];
    let calls = 0;
    const seen: number[] = [];
    const feed = new EventFeed(
      async (from) => {
        calls += 1;
        return docWith(records, from);
      },
      (r) => seen.push(r.seq),
    );

    const first = feed.sync();
    const second = feed.sync();
    await Promise.all([first, second]);
    await feed.sync();

    expect(seen).toEqual([1]);
    expect(calls).toBeLessThanOrEqual(3);
  });
});
