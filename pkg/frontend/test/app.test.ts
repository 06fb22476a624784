import { beforeEach, describe, expect, it } from 'vitest';

import { App } from '../src/app';
import { regionTexts } from '../src/announce';
import type { MessageRecord, MetaDoc } from '../src/types';
import { BLANK_STATE, FakeGateway, JourneyDoc } from './helpers/fakeGateway';
import { pressKey, RecordingSpeech } from './helpers/drive';
import actionsDoc from './fixtures/actions.json';
import journeyDoc from './fixtures/journey.json';

const meta = actionsDoc as MetaDoc;
const journey = journeyDoc as unknown as JourneyDoc;

beforeEach(() => {
  document.body.innerHTML = '';
});

async function bootApp(fake: FakeGateway, speech = new RecordingSpeech()) {
  const root = document.createElement('div');
  document.body.appendChild(root);
  const app = await App.boot(root, {
    fetchImpl: fake.fetch,
    session: journey.create_request,
    speech,
  });
  return { app, speech };
}

describe('failure handling', () => {
  it('announces a gateway failure politely and keeps working', async () => {
    const fake = new FakeGateway(meta, null);
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = await App.boot(root, { fetchImpl: fake.fetch });

    fake.actionFailures = 1;
    pressKey(document, 'ArrowRight');
    await app.queue.idle;

    expect(regionTexts(app.regions.errors)).toEqual([
      'Request failed: internal gateway error',
    ]);
    expect(regionTexts(app.regions.status)).toEqual([]);

    pressKey(document, 'ArrowRight');
    await app.queue.idle;
    expect(fake.requests).toEqual([{ action: 'pan', direction: 'Right' }]);
  });
});

describe('stream resilience through the app', () => {
  it('recovers a dropped record transparently', async () => {
    const fake = new FakeGateway(meta, journey);
    const { app, speech } = await bootApp(fake);

    fake.dropOnce = true;
    const response = await app.submit(journey.steps[0]!.request);
    expect(response?.ok).toBe(true);

    const expected = journey.steps[0]!.records.filter(
      (r): r is MessageRecord => r.type === 'message',
    );
    expect(app.state.voicedLog.map((v) => v.text)).toEqual(expected.map((m) => m.text));
    expect(speech.utterances.map((u) => u.text)).toEqual(expected.map((m) => m.text));
    expect(fake.mismatches).toEqual([]);
  });

  it('resumes after a dead connection without losing announcements', async () => {
    const fake = new FakeGateway(meta, journey);
    const { app } = await bootApp(fake);

    fake.eventFailures = 1;
    await app.submit(journey.steps[0]!.request);
    expect(regionTexts(app.regions.errors)).toEqual(['Request failed: network down']);
    expect(app.state.voicedLog).toEqual([]);

    await app.submit(journey.steps[1]!.request);
    const expected = [...journey.steps[0]!.records, ...journey.steps[1]!.records]
      .filter((r): r is MessageRecord => r.type === 'message')
      .map((m) => m.text);
    expect(app.state.voicedLog.map((v) => v.text)).toEqual(expected);
    expect(fake.mismatches).toEqual([]);
  });
});

describe('structured describe', () => {
  it('renders follow-ups as activatable chat turns', async () => {
    const followups = [
      'What does the street ahead look like?',
      'Are there any obstacles on the sidewalk ahead?',
      'Which direction is the nearest crosswalk?',
    ];
    const describeJourney: JourneyDoc = {
      create_request: {},
      create: { v: 1, session_id: 's1', state: BLANK_STATE },
      steps: [
        {
          request: { action: 'describe', structured: true },
          response: {
            v: 1,
            ok: true,
            error: null,
            messages: [{ text: 'A quiet street scene.', channel: 'Chat' }],
            state: BLANK_STATE,
            describe: {
              description: 'A quiet street scene.',
              mode: 'Default',
              ok: true,
              structured: {
                mobility_features: [],
                obstacles: [],
                safety_summary: 'The immediate area appears clear to traverse.',
                followups,
              },
            },
          },
          records: [
            { seq: 1, type: 'event', event: { v: 1, ts: 0, kind: 'Describe', payload: {} } },
            { seq: 2, type: 'message', text: 'A quiet street scene.', channel: 'Chat' },
          ],
        },
        {
          request: { action: 'chat_turn', input: followups[1]! },
          response: {
            v: 1,
            ok: true,
            error: null,
            messages: [{ text: 'No, I do not see any obstacles from here.', channel: 'Chat' }],
            state: BLANK_STATE,
            chat: { reply: 'No, I do not see any obstacles from here.', commands: [], ok: true },
          },
          records: [
            { seq: 3, type: 'event', event: { v: 1, ts: 0, kind: 'ChatTurn', payload: { input: followups[1]! } } },
            { seq: 4, type: 'message', text: 'No, I do not see any obstacles from here.', channel: 'Chat' },
          ],
        },
      ],
      final_state: { v: 1, state: BLANK_STATE },
      final_next: 5,
    };

    const fake = new FakeGateway(meta, describeJourney);
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = await App.boot(root, { fetchImpl: fake.fetch });

    const describeButton = root.querySelector<HTMLButtonElement>('#describe-structured-button')!;
    describeButton.click();
    await app.queue.idle;

    const rendered = Array.from(app.chat.followups.querySelectorAll('button'));
    expect(rendered.map((b) => b.textContent)).toEqual(followups);

    rendered[1]!.click();
    await app.queue.idle;

    expect(fake.mismatches).toEqual([]);
    expect(regionTexts(app.regions.chat)).toEqual([
      'A quiet street scene.',
      'No, I do not see any obstacles from here.',
    ]);
  });
});

describe('widget wiring', () => {
  it('keeps the search box, chat input, and describe button focusable', async () => {
    const fake = new FakeGateway(meta, null);
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = await App.boot(root, { fetchImpl: fake.fetch });

    for (const el of [
      app.searchInput,
      app.chat.input,
      root.querySelector<HTMLButtonElement>('#describe-button')!,
    ]) {
      el.focus();
      expect(document.activeElement).toBe(el);
      expect(el.tabIndex).toBeGreaterThanOrEqual(0);
    }
  });

  it('sends chat_close from the chat panel control', async () => {
    const fake = new FakeGateway(meta, null);
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = await App.boot(root, { fetchImpl: fake.fetch });

    app.chat.closeButton.click();
    await app.queue.idle;
    expect(fake.requests).toEqual([{ action: 'chat_close' }]);
  });

  it('stops speech when Escape reaches the gateway', async () => {
    const stopJourney: JourneyDoc = {
      create_request: {},
      create: { v: 1, session_id: 's1', state: BLANK_STATE },
      steps: [
        {
          request: { action: 'stop_speech' },
          response: { v: 1, ok: true, error: null, messages: [], state: BLANK_STATE },
          records: [
            { seq: 1, type: 'event', event: { v: 1, ts: 0, kind: 'Hotkey', payload: { action: 'stop_speech' } } },
            { seq: 2, type: 'control', control: 'stop_speech' },
          ],
        },
      ],
      final_state: { v: 1, state: BLANK_STATE },
      final_next: 3,
    };
    const fake = new FakeGateway(meta, stopJourney);
    const speech = new RecordingSpeech();
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = await App.boot(root, { fetchImpl: fake.fetch, speech });

    pressKey(document, 'Escape');
    await app.queue.idle;

    expect(fake.mismatches).toEqual([]);
    expect(speech.stops).toBe(1);
    expect(regionTexts(app.regions.status)).toEqual([]);
  });
});
