import type { Message } from './types.js';

export interface LiveRegions {
  /** Assertive log for system facts: movement, teleports, info queries. */
  status: HTMLElement;
  /** Polite log for model output: descriptions and chat replies. */
  chat: HTMLElement;
  /** Polite one-line region for client-side errors. */
  errors: HTMLElement;
}

/**
 * Builds the two voice channels as separate ARIA live regions. Both
 * are append-only logs so screen readers announce each new entry and
 * sighted users can scroll the history; the visual styling differs per
 * channel as a stand-in for the two voices.
 */
export function createLiveRegions(root: HTMLElement): LiveRegions {
  const status = root.ownerDocument.createElement('div');
  status.id = 'status-region';
  status.className = 'voice voice-status';
  status.setAttribute('role', 'log');
  status.setAttribute('aria-live', 'assertive');
  status.setAttribute('aria-atomic', 'false');
  status.setAttribute('aria-label', 'Status announcements');

  const chat = root.ownerDocument.createElement('div');
  chat.id = 'chat-region';
  chat.className = 'voice voice-chat';
  chat.setAttribute('role', 'log');
  chat.setAttribute('aria-live', 'polite');
  chat.setAttribute('aria-atomic', 'false');
  chat.setAttribute('aria-label', 'Assistant announcements');

  const errors = root.ownerDocument.createElement('div');
  errors.id = 'error-region';
  errors.className = 'voice voice-error';
  errors.setAttribute('role', 'status');
  errors.setAttribute('aria-live', 'polite');
  errors.setAttribute('aria-label', 'Errors');

  root.append(status, chat, errors);
  return { status, chat, errors };
}

export function announceMessage(regions: LiveRegions, message: Message): void {
  const region = message.channel === 'Chat' ? regions.chat : regions.status;
  const entry = region.ownerDocument.createElement('p');
  entry.textContent = message.text;
  region.appendChild(entry);
}

/** Client-side failures are announced politely, never assertively. */
export function announceError(regions: LiveRegions, text: string): void {
  regions.errors.textContent = '';
  const entry = regions.errors.ownerDocument.createElement('p');
  entry.textContent = text;
  regions.errors.appendChild(entry);
}

/** The region's announcement history as plain strings, for tests. */
export function regionTexts(region: HTMLElement): string[] {
  return Array.from(region.children, (child) => child.textContent ?? '');
}
