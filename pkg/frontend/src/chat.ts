export interface SpeechRecognizer {
  start(): void;
  /** Ends capture and resolves to the recognized transcript. */
  stop(): Promise<string>;
}

export interface Earcons {
  micOn(): void;
  micOff(): void;
}

export interface ChatPanelOptions {
  onTurn: (text: string) => void;
  onClose?: () => void;
  recognizer?: SpeechRecognizer;
  earcons?: Earcons;
}

/**
 * The conversation surface: a typed input, an optional push-to-talk
 * button backed by a speech-recognition hook, the visual transcript,
 * and suggested follow-up questions rendered as activatable buttons.
 * Everything a user submits here flows out through `onTurn`; the panel
 * itself never talks to the gateway.
 */
export class ChatPanel {
  readonly root: HTMLElement;
  readonly input: HTMLInputElement;
  readonly sendButton: HTMLButtonElement;
  readonly micButton: HTMLButtonElement;
  readonly closeButton: HTMLButtonElement;
  readonly followups: HTMLUListElement;
  readonly transcript: HTMLOListElement;
  private capturing = false;

  constructor(doc: Document, private readonly opts: ChatPanelOptions) {
    this.root = doc.createElement('section');
    this.root.id = 'chat-panel';
    this.root.setAttribute('aria-label', 'Chat');

    const form = doc.createElement('form');
    const label = doc.createElement('label');
    label.htmlFor = 'chat-input';
    label.textContent = 'Ask or command';
    this.input = doc.createElement('input');
    this.input.type = 'text';
    this.input.id = 'chat-input';
    this.input.autocomplete = 'off';
    this.sendButton = doc.createElement('button');
    this.sendButton.type = 'submit';
    this.sendButton.textContent = 'Send';
    form.append(label, this.input, this.sendButton);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      this.submitTyped();
    });

    this.micButton = doc.createElement('button');
    this.micButton.type = 'button';
    this.micButton.id = 'chat-mic';
    this.micButton.textContent = 'Hold to talk';
    this.micButton.disabled = !opts.recognizer;
    this.micButton.addEventListener('pointerdown', () => this.micDown());
    this.micButton.addEventListener('pointerup', () => {
      void this.micUp();
    });

    this.closeButton = doc.createElement('button');
    this.closeButton.type = 'button';
    this.closeButton.id = 'chat-close';
    this.closeButton.textContent = 'Close chat';
    this.closeButton.addEventListener('click', () => this.opts.onClose?.());

    this.followups = doc.createElement('ul');
    this.followups.id = 'chat-followups';
    this.followups.setAttribute('aria-label', 'Suggested questions');

    this.transcript = doc.createElement('ol');
    this.transcript.id = 'chat-transcript';
    this.transcript.setAttribute('aria-label', 'Conversation');

    this.root.append(form, this.micButton, this.closeButton, this.followups, this.transcript);
  }

  focusInput(): void {
    this.input.focus();
  }

  private submitTyped(): void {
    const text = this.input.value.trim();
    if (!text) {
      return;
    }
    this.input.value = '';
    this.opts.onTurn(text);
  }

  private micDown(): void {
    if (!this.opts.recognizer || this.capturing) {
      return;
    }
    this.capturing = true;
    this.opts.earcons?.micOn();
    this.opts.recognizer.start();
  }

  private async micUp(): Promise<void> {
    if (!this.opts.recognizer || !this.capturing) {
      return;
    }
    this.capturing = false;
    this.opts.earcons?.micOff();
    const text = (await this.opts.recognizer.stop()).trim();
    if (text) {
      this.opts.onTurn(text);
    }
  }

  /** Replaces the suggested questions; activating one sends it as a turn. */
  showFollowups(questions: string[]): void {
    this.followups.textContent = '';
    const doc = this.followups.ownerDocument;
    for (const question of questions) {
      const item = doc.createElement('li');
      const button = doc.createElement('button');
      button.type = 'button';
      button.className = 'followup';
      button.textContent = question;
      button.addEventListener('click', () => this.opts.onTurn(question));
      item.appendChild(button);
      this.followups.appendChild(item);
    }
  }

  addTranscript(role: 'user' | 'assistant', text: string): void {
    const doc = this.transcript.ownerDocument;
    const item = doc.createElement('li');
    item.className = `turn turn-${role}`;
    item.textContent = text;
    this.transcript.appendChild(item);
  }
}
