// JSON document shapes of the gateway contract. Field names mirror the
// server payloads exactly; the UI never invents or renames fields.

export type Channel = 'Status' | 'Chat';

export interface Message {
  text: string;
  channel: Channel;
}

export interface StateDoc {
  pano_id: string;
  heading: number;
  lat: number;
  lng: number;
  address: string;
  selected_place: string | null;
  visit_count: number;
  chat_open: boolean;
}

export interface ActionRequest {
  action: string;
  [arg: string]: unknown;
}

export interface StructuredDescribeDoc {
  mobility_features: string[];
  obstacles: string[];
  safety_summary: string;
  followups: string[];
}

export interface DescribeDoc {
  description: string;
  mode: string;
  ok: boolean;
  structured?: StructuredDescribeDoc;
}

export interface ChatResultDoc {
  reply: string;
  commands: string[];
  ok: boolean;
}

export interface ActionResponse {
  v: number;
  ok: boolean;
  error: string | null;
  messages: Message[];
  state: StateDoc;
  describe?: DescribeDoc;
  chat?: ChatResultDoc;
  [extra: string]: unknown;
}

export interface SessionEventDoc {
  v: number;
  ts: number;
  kind: string;
  payload: Record<string, unknown>;
}

export interface EventRecord {
  seq: number;
  type: 'event';
  event: SessionEventDoc;
}

export interface MessageRecord {
  seq: number;
  type: 'message';
  text: string;
  channel: Channel;
}

export interface ControlRecord {
  seq: number;
  type: 'control';
  control: string;
}

export type StreamRecord = EventRecord | MessageRecord | ControlRecord;

export interface EventsDoc {
  v: number;
  records: StreamRecord[];
  next: number;
}

export interface CreateSessionDoc {
  v: number;
  session_id: string;
  state: StateDoc;
}

export interface StateEnvelope {
  v: number;
  state: StateDoc;
}

export interface HotkeyRow {
  key: string;
  request: ActionRequest;
  behavior: string;
}

export interface MetaDoc {
  v: number;
  actions: string[];
  info_kinds: string[];
  hotkeys: HotkeyRow[];
}

export interface CreateSessionRequest {
  fixture?: string;
  start_pano?: string;
  heading?: number;
  config?: Record<string, unknown>;
  profile?: string;
}
