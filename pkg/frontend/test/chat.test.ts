import { beforeEach, describe, expect, it } from 'vitest';

import { ChatPanel, Earcons, SpeechRecognizer } from '../src/chat';

class FakeRecognizer implements SpeechRecognizer {
  started = 0;
  transcript = '';

  start(): void {
    this.started += 1;
  }

  async stop(): Promise<string> {
    return this.transcript;
  }
}

class FakeEarcons implements Earcons {
  tones: string[] = [];

  micOn(): void {
    this.tones.push('on');
  }

  micOff(): void {
    this.tones.push('off');
  }
}

beforeEach(() => {
  document.body.innerHTML = '';
});

function makePanel(extra: { recognizer?: SpeechRecognizer; earcons?: Earcons } = {}) {
  const turns: string[] = [];
  let closes = 0;
  const panel = new ChatPanel(document, {
    onTurn: (text) => turns.push(text),
    onClose: () => {
      closes += 1;
    },
    ...extra,
  });
  document.body.appendChild(panel.root);
  return { panel, turns, closed: () => closes };
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

describe('typed input', () => {
  it('sends the typed text as one turn and clears the field', () => {
    const { panel, turns } = makePanel();
    panel.input.value = 'turn around';
    panel.input.form!.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));

    expect(turns).toEqual(['turn around']);
    expect(panel.input.value).toBe('');
  });

  it('ignores empty submissions', () => {
    const { panel, turns } = makePanel();
    panel.input.value = '   ';
    panel.input.form!.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    expect(turns).toEqual([]);
  });
});

describe('follow-up suggestions', () => {
  it('renders each question as an activatable item that sends itself', () => {
    const { panel, turns } = makePanel();
    panel.showFollowups([
      'Are there any obstacles on the sidewalk ahead?',
      'Which direction is the nearest crosswalk?',
    ]);

    const buttons = Array.from(panel.followups.querySelectorAll('button'));
    expect(buttons.map((b) => b.textContent)).toEqual([
      'Are there any obstacles on the sidewalk ahead?',
      'Which direction is the nearest crosswalk?',
    ]);

    buttons[1]!.click();
    expect(turns).toEqual(['Which direction is the nearest crosswalk?']);
  });

  it('replaces earlier suggestions on the next describe', () => {
    const { panel } = makePanel();
    panel.showFollowups(['one', 'two', 'three']);
    panel.showFollowups(['four']);
    const buttons = Array.from(panel.followups.querySelectorAll('button'));
    expect(buttons.map((b) => b.textContent)).toEqual(['four']);
  });
});

describe('push-to-talk', () => {
  it('plays earcons around capture and sends the transcript as a turn', async () => {
    const recognizer = new FakeRecognizer();
    const earcons = new FakeEarcons();
    const { panel, turns } = makePanel({ recognizer, earcons });

    recognizer.transcript = 'where is the bus stop?';
    panel.micButton.dispatchEvent(new Event('pointerdown'));
    expect(earcons.tones).toEqual(['on']);
    expect(recognizer.started).toBe(1);

    panel.micButton.dispatchEvent(new Event('pointerup'));
    await flush();
    expect(earcons.tones).toEqual(['on', 'off']);
    expect(turns).toEqual(['where is the bus stop?']);
  });

  it('drops empty transcripts silently', async () => {
    const recognizer = new FakeRecognizer();
    const { panel, turns } = makePanel({ recognizer });
    panel.micButton.dispatchEvent(new Event('pointerdown'));
    panel.micButton.dispatchEvent(new Event('pointerup'));
    await flush();
    expect(turns).toEqual([]);
  });

  it('disables the mic button without a recognizer', () => {
    const { panel } = makePanel();
    expect(panel.micButton.disabled).toBe(true);
  });
});

describe('closing', () => {
  it('signals close through its own control', () => {
    const { panel, closed } = makePanel();
    panel.closeButton.click();
    expect(closed()).toBe(1);
  });
});
