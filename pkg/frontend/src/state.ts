import type { Channel, StateDoc, StreamRecord } from './types.js';

export interface ChatTurnEntry {
  seq: number;
  role: 'user' | 'assistant';
  text: string;
}

export interface SpeechItem {
  seq: number;
  channel: Channel;
  text: string;
}

/**
 * The client's entire knowledge of a session. The gateway snapshot is
 * authoritative: nothing here derives geography, it only mirrors what
 * the server said last. Stream records must arrive in sequence order;
 * the feed guarantees that and this class enforces it.
 */
export class ClientViewState {
  sessionId = '';
  lastSeq = 0;
  snapshot: StateDoc | null = null;
  chatTranscript: ChatTurnEntry[] = [];
  speechQueue: Record<Channel, SpeechItem[]> = { Status: [], Chat: [] };
  /** Everything routed to a live region, in stream order. */
  voicedLog: SpeechItem[] = [];

  applySnapshot(doc: StateDoc): void {
    this.snapshot = doc;
  }

  applyRecord(record: StreamRecord): void {
    if (record.seq !== this.lastSeq + 1) {
      throw new Error(
        `record ${record.seq} applied out of order (expected ${this.lastSeq + 1})`,
      );
    }
    this.lastSeq = record.seq;
    if (record.type === 'message') {
      const item: SpeechItem = {
        seq: record.seq,
        channel: record.channel,
        text: record.text,
      };
      this.voicedLog.push(item);
      this.speechQueue[record.channel].push(item);
      if (record.channel === 'Chat') {
        this.chatTranscript.push({
          seq: record.seq,
          role: 'assistant',
          text: record.text,
        });
      }
    } else if (record.type === 'event' && record.event.kind === 'ChatTurn') {
      const input = record.event.payload['input'];
      if (typeof input === 'string') {
        this.chatTranscript.push({ seq: record.seq, role: 'user', text: input });
      }
    } else if (record.type === 'control' && record.control === 'stop_speech') {
      this.clearSpeechQueues();
    }
  }

  clearSpeechQueues(): void {
    this.speechQueue.Status.length = 0;
    this.speechQueue.Chat.length = 0;
  }

  /** Drains and returns the pending speech for one voice channel. */
  takeSpeech(channel: Channel): SpeechItem[] {
    const items = this.speechQueue[channel];
    this.speechQueue[channel] = [];
    return items;
  }
}
