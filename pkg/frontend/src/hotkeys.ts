import type { ActionRequest, HotkeyRow } from './types.js';

/**
 * Normalizes a keyboard event to the chord names the gateway's hotkey
 * table uses: plain `ArrowLeft`/`Escape` style key names, and
 * `Alt+X`/`Alt+Space` for Alt combinations.
 */
export function chordOf(event: KeyboardEvent): string | null {
  const key = event.key;
  if (!key) {
    return null;
  }
  if (event.ctrlKey || event.metaKey) {
    return null;
  }
  if (event.altKey) {
    if (key === ' ' || key === 'Spacebar') {
      return 'Alt+Space';
    }
    if (key.length === 1) {
      return `Alt+${key.toUpperCase()}`;
    }
    return `Alt+${key}`;
  }
  return key;
}

export function buildKeymap(rows: HotkeyRow[]): Map<string, ActionRequest> {
  const keymap = new Map<string, ActionRequest>();
  for (const row of rows) {
    keymap.set(row.key, row.request);
  }
  return keymap;
}

function isTextField(target: EventTarget | null): boolean {
  if (!target || !(target instanceof HTMLElement)) {
    return false;
  }
  if (target instanceof HTMLTextAreaElement) {
    return true;
  }
  return target instanceof HTMLInputElement && !['button', 'checkbox', 'radio'].includes(target.type);
}

export interface HotkeyHandle {
  uninstall(): void;
}

/**
 * Installs the keyboard surface. Every bound chord issues exactly one
 * request via `dispatch`. Inside text fields only Alt combinations and
 * Escape stay active, so typing and caret movement are never hijacked
 * while bindings keep working during chat entry.
 */
export function installHotkeys(
  target: EventTarget,
  keymap: Map<string, ActionRequest>,
  dispatch: (request: ActionRequest) => void,
): HotkeyHandle {
  const onKeydown = (raw: Event): void => {
    const event = raw as KeyboardEvent;
    const chord = chordOf(event);
    if (chord === null) {
      return;
    }
    if (isTextField(event.target) && !chord.startsWith('Alt+') && chord !== 'Escape') {
      return;
    }
    const request = keymap.get(chord);
    if (!request) {
      return;
    }
    event.preventDefault();
    dispatch({ ...request });
  };
  target.addEventListener('keydown', onKeydown);
  return {
    uninstall: () => target.removeEventListener('keydown', onKeydown),
  };
}
