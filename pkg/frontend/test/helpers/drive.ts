import type { Channel } from '../../src/types';
import type { SpeechSink } from '../../src/speech';

/** KeyboardEvent init for a gateway chord name like `Alt+M` or `ArrowUp`. */
export function keyInit(chord: string): KeyboardEventInit {
  if (chord === 'Alt+Space') {
    return { key: ' ', altKey: true, bubbles: true, cancelable: true };
  }
  if (chord.startsWith('Alt+')) {
    return { key: chord.slice(4).toLowerCase(), altKey: true, bubbles: true, cancelable: true };
  }
  return { key: chord, bubbles: true, cancelable: true };
}

export function pressKey(target: EventTarget, chord: string): void {
  target.dispatchEvent(new KeyboardEvent('keydown', keyInit(chord)));
}

export function submitForm(form: HTMLFormElement): void {
  form.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
}

export class RecordingSpeech implements SpeechSink {
  utterances: Array<{ channel: Channel; text: string }> = [];
  stops = 0;

  speak(channel: Channel, text: string): void {
    this.utterances.push({ channel, text });
  }

  stop(): void {
    this.stops += 1;
  }
}
