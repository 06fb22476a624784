import type { Channel } from './types.js';

export interface SpeechSink {
  speak(channel: Channel, text: string): void;
  stop(): void;
}

export interface VoicePersona {
  rate: number;
  pitch: number;
}

/** Two fixed personas stand in for the two voices of the interface. */
export const DEFAULT_PERSONAS: Record<Channel, VoicePersona> = {
  Status: { rate: 1.1, pitch: 0.8 },
  Chat: { rate: 1.0, pitch: 1.2 },
};

/**
 * Browser speech via the Web Speech API, one persona per channel.
 * Self-voicing is optional; screen-reader users get the same text from
 * the live regions and can leave this off.
 */
export class BrowserSpeech implements SpeechSink {
  constructor(
    private readonly synth: SpeechSynthesis,
    private readonly personas: Record<Channel, VoicePersona> = DEFAULT_PERSONAS,
  ) {}

  speak(channel: Channel, text: string): void {
    const utterance = new SpeechSynthesisUtterance(text);
    utterance.rate = this.personas[channel].rate;
    utterance.pitch = this.personas[channel].pitch;
    this.synth.speak(utterance);
  }

  stop(): void {
    this.synth.cancel();
  }
}

export class NullSpeech implements SpeechSink {
  speak(): void {}
  stop(): void {}
}

/** Browser speech when the platform has it, otherwise silent. */
export function defaultSpeech(): SpeechSink {
  const synth = (globalThis as { speechSynthesis?: SpeechSynthesis }).speechSynthesis;
  if (synth && typeof SpeechSynthesisUtterance !== 'undefined') {
    return new BrowserSpeech(synth);
  }
  return new NullSpeech();
}
