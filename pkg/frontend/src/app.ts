import { GatewayClient } from './api.js';
import { announceError, announceMessage, createLiveRegions, LiveRegions } from './announce.js';
import { ChatPanel, Earcons, SpeechRecognizer } from './chat.js';
import { buildKeymap, HotkeyHandle, installHotkeys } from './hotkeys.js';
import { ActionQueue } from './queue.js';
import { defaultSpeech, SpeechSink } from './speech.js';
import { ClientViewState } from './state.js';
import { EventFeed } from './stream.js';
import type {
  ActionRequest,
  ActionResponse,
  CreateSessionRequest,
  MetaDoc,
  StateDoc,
  StreamRecord,
} from './types.js';

export interface AppOptions {
  baseUrl?: string;
  fetchImpl?: (input: string, init?: RequestInit) => Promise<Response>;
  session?: CreateSessionRequest;
  speech?: SpeechSink;
  recognizer?: SpeechRecognizer;
  earcons?: Earcons;
}

/**
 * The assembled client: a pure view/controller over the gateway
 * contract. Keyboard chords and widgets produce action requests, the
 * event stream produces announcements, and the server snapshot is the
 * only source of navigation truth.
 */
export class App {
  readonly state = new ClientViewState();
  readonly queue = new ActionQueue();
  readonly client: GatewayClient;
  readonly speech: SpeechSink;
  meta!: MetaDoc;
  keymap!: Map<string, ActionRequest>;
  regions!: LiveRegions;
  chat!: ChatPanel;
  feed!: EventFeed;
  searchInput!: HTMLInputElement;
  viewPanel!: HTMLElement;
  private hotkeys: HotkeyHandle | null = null;

  private constructor(
    readonly root: HTMLElement,
    private readonly opts: AppOptions,
  ) {
    this.client = new GatewayClient(opts.baseUrl ?? '', opts.fetchImpl);
    this.speech = opts.speech ?? defaultSpeech();
  }

  static async boot(root: HTMLElement, opts: AppOptions = {}): Promise<App> {
    const app = new App(root, opts);
    app.meta = await app.client.getMeta();
    app.keymap = buildKeymap(app.meta.hotkeys);
    const created = await app.client.createSession(opts.session ?? {});
    app.state.sessionId = created.session_id;
    app.state.applySnapshot(created.state);
    app.buildDom();
    app.renderSnapshot();
    app.feed = new EventFeed(
      (from) => app.client.getEvents(app.state.sessionId, from),
      (record) => app.onRecord(record),
    );
    app.hotkeys = installHotkeys(root.ownerDocument, app.keymap, (request) => {
      void app.submit(request);
    });
    return app;
  }

  private buildDom(): void {
    const doc = this.root.ownerDocument;

    const search = doc.createElement('form');
    search.id = 'search-form';
    const searchLabel = doc.createElement('label');
    searchLabel.htmlFor = 'search-input';
    searchLabel.textContent = 'Teleport to';
    this.searchInput = doc.createElement('input');
    this.searchInput.type = 'text';
    this.searchInput.id = 'search-input';
    this.searchInput.autocomplete = 'off';
    const searchGo = doc.createElement('button');
    searchGo.type = 'submit';
    searchGo.textContent = 'Go';
    search.append(searchLabel, this.searchInput, searchGo);
    search.addEventListener('submit', (event) => {
      event.preventDefault();
      const query = this.searchInput.value.trim();
      if (query) {
        this.searchInput.value = '';
        void this.submit({ action: 'teleport', query });
      }
    });

    this.viewPanel = doc.createElement('section');
    this.viewPanel.id = 'view-panel';
    this.viewPanel.setAttribute('aria-label', 'Current location');

    const describe = doc.createElement('button');
    describe.type = 'button';
    describe.id = 'describe-button';
    describe.textContent = 'Describe this view';
    describe.addEventListener('click', () => {
      void this.submit({ action: 'describe' });
    });
    const describeDeep = doc.createElement('button');
    describeDeep.type = 'button';
    describeDeep.id = 'describe-structured-button';
    describeDeep.textContent = 'Describe with details';
    describeDeep.addEventListener('click', () => {
      void this.submit({ action: 'describe', structured: true });
    });

    this.chat = new ChatPanel(doc, {
      onTurn: (text) => {
        void this.submit({ action: 'chat_turn', input: text });
      },
      onClose: () => {
        void this.submit({ action: 'chat_close' });
      },
      recognizer: this.opts.recognizer,
      earcons: this.opts.earcons,
    });

    this.root.append(search, this.viewPanel, describe, describeDeep, this.chat.root);
    this.regions = createLiveRegions(this.root);
  }

  /**
   * Queues one action request, applies the authoritative snapshot from
   * the response, then catches up on the event stream. Gateway or
   * transport failures become a polite error announcement.
   */
  submit(request: ActionRequest): Promise<ActionResponse | null> {
    return this.queue.enqueue(async () => {
      try {
        const response = await this.client.postAction(this.state.sessionId, request);
        this.state.applySnapshot(response.state);
        this.renderSnapshot();
        if (response.describe?.structured) {
          this.chat.showFollowups(response.describe.structured.followups);
        }
        await this.feed.sync();
        this.afterAction(request);
        return response;
      } catch (err) {
        const detail = err instanceof Error ? err.message : String(err);
        announceError(this.regions, `Request failed: ${detail}`);
        return null;
      }
    });
  }

  private afterAction(request: ActionRequest): void {
    if (request.action === 'chat_open') {
      if (request['mode'] === 'voice') {
        this.chat.micButton.focus();
      } else {
        this.chat.focusInput();
      }
    }
  }

  private onRecord(record: StreamRecord): void {
    this.state.applyRecord(record);
    if (record.type === 'message') {
      announceMessage(this.regions, record);
      if (record.channel === 'Chat') {
        this.chat.addTranscript('assistant', record.text);
      }
      for (const item of this.state.takeSpeech(record.channel)) {
        this.speech.speak(item.channel, item.text);
      }
    } else if (record.type === 'event' && record.event.kind === 'ChatTurn') {
      const input = record.event.payload['input'];
      if (typeof input === 'string') {
        this.chat.addTranscript('user', input);
      }
    } else if (record.type === 'control' && record.control === 'stop_speech') {
      this.speech.stop();
    }
  }

  private renderSnapshot(): void {
    const doc = this.root.ownerDocument;
    const snapshot = this.state.snapshot;
    this.viewPanel.textContent = '';
    if (!snapshot) {
      return;
    }
    const rows: Array<[string, string]> = [
      ['Address', snapshot.address],
      ['Panorama', snapshot.pano_id],
      ['Heading', `${snapshot.heading}°`],
      ['Visits', String(snapshot.visit_count)],
    ];
    if (snapshot.selected_place) {
      rows.push(['Selected place', snapshot.selected_place]);
    }
    const list = doc.createElement('dl');
    for (const [term, value] of rows) {
      const dt = doc.createElement('dt');
      dt.textContent = term;
      const dd = doc.createElement('dd');
      dd.textContent = value;
      list.append(dt, dd);
    }
    this.viewPanel.appendChild(list);
  }

  /** Refetches the authoritative snapshot and applies it. */
  async refreshState(): Promise<StateDoc> {
    const doc = await this.client.getState(this.state.sessionId);
    this.state.applySnapshot(doc.state);
    this.renderSnapshot();
    return doc.state;
  }

  async close(): Promise<void> {
    this.hotkeys?.uninstall();
    this.hotkeys = null;
    await this.client.deleteSession(this.state.sessionId);
  }
}
