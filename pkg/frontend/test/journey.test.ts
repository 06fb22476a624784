import { beforeEach, describe, expect, it } from 'vitest';

import { App } from '../src/app';
import { regionTexts } from '../src/announce';
import type { CreateSessionRequest, MessageRecord, MetaDoc } from '../src/types';
import { FakeGateway, JourneyDoc } from './helpers/fakeGateway';
import { pressKey, RecordingSpeech, submitForm } from './helpers/drive';
import actionsDoc from './fixtures/actions.json';
import journeyDoc from './fixtures/journey.json';

const meta = actionsDoc as MetaDoc;
const journey = journeyDoc as unknown as JourneyDoc;

const allRecords = journey.steps.flatMap((step) => step.records);
const expectedMessages = allRecords.filter((r): r is MessageRecord => r.type === 'message');

async function bootJourneyApp(speech = new RecordingSpeech()) {
  const fake = new FakeGateway(meta, journey);
  const root = document.createElement('div');
  document.body.appendChild(root);
  const app = await App.boot(root, {
    fetchImpl: fake.fetch,
    session: journey.create_request as CreateSessionRequest,
    speech,
  });
  return { app, fake, speech };
}

/**
 * Walks the recorded journey through the real widgets and keyboard
 * surface: teleport via the search box, two pans, three steps, a jump,
 * chat open, then three chat turns of which one is a movement command.
 */
async function driveJourney(app: App): Promise<void> {
  app.searchInput.value = 'Gridville City Hall';
  submitForm(app.searchInput.form!);
  await app.queue.idle;

  for (const chord of ['ArrowRight', 'ArrowRight', 'ArrowUp', 'ArrowUp', 'ArrowUp', 'Alt+J', 'Alt+C']) {
    pressKey(document, chord);
    await app.queue.idle;
  }

  for (const turn of ['where is the city hall?', 'turn around', 'is there a cafe nearby?']) {
    app.chat.input.value = turn;
    submitForm(app.chat.input.form!);
    await app.queue.idle;
  }
}

beforeEach(() => {
  document.body.innerHTML = '';
});

describe('scripted journey through the browser client', () => {
  it('issues exactly the recorded gateway requests', async () => {
    const { app, fake } = await bootJourneyApp();
    await driveJourney(app);

    expect(fake.mismatches).toEqual([]);
    expect(fake.requests).toEqual(journey.steps.map((step) => step.request));
    expect(app.state.lastSeq).toBe(journey.final_next - 1);
  });

  it('includes exactly one movement command among the chat turns', async () => {
    const { app, fake } = await bootJourneyApp();
    await driveJourney(app);

    expect(fake.mismatches).toEqual([]);
    const commands = journey.steps.flatMap((step) => step.response.chat?.commands ?? []);
    expect(commands).toEqual(['turnAround']);
  });

  it('renders live-region text identical to the gateway event stream', async () => {
    const { app, fake } = await bootJourneyApp();
    await driveJourney(app);
    expect(fake.mismatches).toEqual([]);

    expect(app.state.voicedLog).toEqual(
      expectedMessages.map((m) => ({ seq: m.seq, channel: m.channel, text: m.text })),
    );
    expect(regionTexts(app.regions.status)).toEqual(
      expectedMessages.filter((m) => m.channel === 'Status').map((m) => m.text),
    );
    expect(regionTexts(app.regions.chat)).toEqual(
      expectedMessages.filter((m) => m.channel === 'Chat').map((m) => m.text),
    );
  });

  it('routes Status and Chat to separate live regions', async () => {
    const { app } = await bootJourneyApp();
    await driveJourney(app);

    expect(app.regions.status).not.toBe(app.regions.chat);
    expect(app.regions.status.getAttribute('aria-live')).toBe('assertive');
    expect(app.regions.chat.getAttribute('aria-live')).toBe('polite');
    const statusTexts = regionTexts(app.regions.status);
    const chatTexts = regionTexts(app.regions.chat);
    expect(statusTexts.length).toBeGreaterThan(0);
    expect(chatTexts.length).toBeGreaterThan(0);
    expect(statusTexts.some((text) => chatTexts.includes(text))).toBe(false);
  });

  it('binds every key of the gateway hotkey table', async () => {
    const { app } = await bootJourneyApp();

    expect(meta.hotkeys.length).toBe(17);
    for (const row of meta.hotkeys) {
      expect(app.keymap.get(row.key), row.key).toEqual(row.request);
    }
  });

  it('treats the gateway snapshot as authoritative, refetch included', async () => {
    const { app } = await bootJourneyApp();
    await driveJourney(app);

    expect(app.state.snapshot).toEqual(journey.final_state.state);
    const refetched = await app.refreshState();
    expect(refetched).toEqual(journey.final_state.state);
    expect(app.state.snapshot).toEqual(refetched);
  });

  it('keeps the chat transcript in event-stream order', async () => {
    const { app } = await bootJourneyApp();
    await driveJourney(app);

    const seqs = app.state.chatTranscript.map((entry) => entry.seq);
    expect([...seqs].sort((a, b) => a - b)).toEqual(seqs);
    expect(
      app.state.chatTranscript.filter((e) => e.role === 'user').map((e) => e.text),
    ).toEqual(['where is the city hall?', 'turn around', 'is there a cafe nearby?']);
    expect(
      app.state.chatTranscript.filter((e) => e.role === 'assistant').map((e) => e.text),
    ).toEqual(expectedMessages.filter((m) => m.channel === 'Chat').map((m) => m.text));
  });

  it('speaks every announcement through the speech sink in order', async () => {
    const { app, speech } = await bootJourneyApp();
    await driveJourney(app);

    expect(speech.utterances).toEqual(
      expectedMessages.map((m) => ({ channel: m.channel, text: m.text })),
    );
  });

  it('focuses the chat input when chat opens', async () => {
    const { app } = await bootJourneyApp();
    app.searchInput.value = 'Gridville City Hall';
    submitForm(app.searchInput.form!);
    await app.queue.idle;
    for (const chord of ['ArrowRight', 'ArrowRight', 'ArrowUp', 'ArrowUp', 'ArrowUp', 'Alt+J']) {
      pressKey(document, chord);
    }
    await app.queue.idle;

    pressKey(document, 'Alt+C');
    await app.queue.idle;
    expect(document.activeElement).toBe(app.chat.input);
  });
});
