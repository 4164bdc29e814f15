/**
 * Client session state: the latest frame, the pending action, the active
 * editor tool and connection status. Pure transitions so the whole thing
 * is unit-testable without a browser.
 */

import {
  clampAction,
  parseServerMessage,
  type ActionMessage,
  type ClientMessage,
  type Frame,
  type ServerMessage,
} from './protocol.js';

export type Tool = 'select' | 'add_polygon' | 'add_circle' | 'add_joint' | 'add_thruster' | 'role_brush';

export interface ClientState {
  connection: 'connecting' | 'open' | 'closed';
  session: string | null;
  tickRate: number;
  latestFrame: Frame | null;
  pendingAction: ActionMessage;
  lastSentAction: string | null;
  lastError: { code: string; detail: string } | null;
  levelDoc: Record<string, unknown> | null;
  tool: Tool;
  motorCount: number;
  thrusterCount: number;
}

export function initialState(): ClientState {
  return {
    connection: 'connecting',
    session: null,
    tickRate: 30,
    latestFrame: null,
    pendingAction: { type: 'action', motors: [], thrusters: [] },
    lastSentAction: null,
    lastError: null,
    levelDoc: null,
    tool: 'select',
    motorCount: 0,
    thrusterCount: 0,
  };
}

/** Apply one server message; returns the parsed message for side channels. */
export function applyServerText(state: ClientState, text: string): ServerMessage | null {
  let msg: ServerMessage;
  try {
    msg = parseServerMessage(text);
  } catch (err) {
    // keep the last good frame, surface the problem
    state.lastError = { code: 'client_parse', detail: String(err) };
    return null;
  }
  switch (msg.type) {
    case 'hello':
      state.connection = 'open';
      state.session = msg.session;
      state.tickRate = msg.tick_rate;
      break;
    case 'frame': {
      state.latestFrame = msg;
      state.motorCount = countMotorSlots(msg);
      state.thrusterCount = countThrusterSlots(msg);
      break;
    }
    case 'level_doc':
      state.levelDoc = msg.doc;
      break;
    case 'error':
      state.lastError = { code: msg.code, detail: msg.detail };
      break;
  }
  return msg;
}

function countMotorSlots(frame: Frame): number {
  // capacity, not just active entries: slots index fixed-size arrays
  let n = 0;
  for (const j of frame.joints) n = Math.max(n, j.slot + 1);
  return Math.max(n, frame.joints.length);
}

function countThrusterSlots(frame: Frame): number {
  let n = 0;
  for (const t of frame.thrusters) n = Math.max(n, t.slot + 1);
  return Math.max(n, frame.thrusters.length);
}

/**
 * Stage a new action; returns the message to transmit, or null when the
 * action is unchanged since the last send. Senders call this at most once
 * per server tick, so the UI never floods the channel.
 */
export function stageAction(
  state: ClientState,
  motors: number[],
  thrusters: number[],
): ActionMessage | null {
  const clamped = clampAction(motors, thrusters);
  state.pendingAction = clamped;
  const encoded = JSON.stringify([clamped.motors, clamped.thrusters]);
  if (encoded === state.lastSentAction) {
    return null;
  }
  state.lastSentAction = encoded;
  return clamped;
}

/** Messages that restart the action cadence (mode changes, resets). */
export function noteSent(state: ClientState, msg: ClientMessage): void {
  if (msg.type === 'reset' || msg.type === 'load_level') {
    state.lastSentAction = null;
  }
}
