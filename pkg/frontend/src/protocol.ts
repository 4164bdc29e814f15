/**
 * Wire protocol types and codecs for the play service.
 *
 * Messages are JSON text over a websocket; see the server's protocol
 * module for the authoritative schema. Frames carry the full entity
 * state every tick plus a 64-bit state hash, so a recorded action log
 * replays exactly through the backend library.
 */

export const PROTOCOL_VERSION = 1;

export type Role = 'none' | 'green' | 'blue' | 'red';
export type Mode = 'play' | 'edit' | 'paused';

export interface BodyEntry {
  slot: number;
  kind: 'polygon' | 'circle';
  position: [number, number];
  rotation: number;
  velocity: [number, number];
  angular_velocity: number;
  role: Role;
  fixated: boolean;
  vertices?: [number, number][];
  radius?: number;
}

export interface JointEntry {
  slot: number;
  body_a: number;
  body_b: number;
  world_anchor: [number, number];
  is_fixed: boolean;
  motor_on: boolean;
  binding: number;
}

export interface ThrusterEntry {
  slot: number;
  body: number;
  world_anchor: [number, number];
  world_angle: number;
  power: number;
  binding: number;
}

export interface Frame {
  type: 'frame';
  protocol: number;
  tick: number;
  timestep: number;
  mode: Mode;
  reward: number;
  done: boolean;
  state_hash: string;
  bodies: BodyEntry[];
  joints: JointEntry[];
  thrusters: ThrusterEntry[];
}

export interface Hello {
  type: 'hello';
  protocol: number;
  session: string;
  tick_rate: number;
}

export interface LevelDoc {
  type: 'level_doc';
  doc: Record<string, unknown>;
}

export interface ErrorMessage {
  type: 'error';
  code: string;
  detail: string;
}

export type ServerMessage = Frame | Hello | LevelDoc | ErrorMessage;

export interface ActionMessage {
  type: 'action';
  motors: number[];
  thrusters: number[];
}

export type ClientMessage =
  | { type: 'load_level'; doc?: Record<string, unknown>; path?: string }
  | { type: 'reset' }
  | ActionMessage
  | { type: 'set_mode'; mode: Mode }
  | { type: 'tick' }
  | { type: 'edit'; op: Record<string, unknown> }
  | { type: 'save' };

export function parseServerMessage(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new Error('server message is not valid JSON');
  }
  if (typeof raw !== 'object' || raw === null || typeof (raw as { type?: unknown }).type !== 'string') {
    throw new Error("server message must be an object with a string 'type'");
  }
  const msg = raw as ServerMessage;
  if (msg.type === 'frame') {
    if (msg.protocol !== PROTOCOL_VERSION) {
      throw new Error(`unsupported protocol ${String(msg.protocol)}`);
    }
    if (!Array.isArray(msg.bodies) || !Array.isArray(msg.joints) || !Array.isArray(msg.thrusters)) {
      throw new Error('frame is missing entity arrays');
    }
    if (typeof msg.state_hash !== 'string' || typeof msg.tick !== 'number') {
      throw new Error('frame is missing tick or state hash');
    }
  }
  return msg;
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

/** Clamp an action to its mode bounds before transmission. */
export function clampAction(motors: number[], thrusters: number[]): ActionMessage {
  return {
    type: 'action',
    motors: motors.map((v) => Math.max(-1, Math.min(1, v))),
    thrusters: thrusters.map((v) => Math.max(0, Math.min(1, v))),
  };
}

/** A frame as recorded in a session transcript: the stream position is the
 * count of client messages sent before the frame was produced. */
export type TranscriptFrame = Frame & { sentBefore: number };

export interface ActionRow {
  motors: number[];
  thrusters: number[];
}

/**
 * Reconstruct the per-env-step action history from a session transcript:
 * one entry per stepped frame (play ticks and manual paused ticks), holding
 * the most recent action sent before that step. This mirrors the server's
 * latest-action-wins rule, so the result replays through the library.
 */
export function reconstructActionLog(
  sent: ClientMessage[],
  frames: TranscriptFrame[],
  motorCount: number,
  thrusterCount: number,
): ActionRow[] {
  const log: ActionRow[] = [];
  let current: ActionRow = {
    motors: new Array(motorCount).fill(0),
    thrusters: new Array(thrusterCount).fill(0),
  };
  let cursor = 0;
  let lastTimestep = 0;
  for (const frame of frames) {
    // apply every message sent before this frame was produced
    while (cursor < frame.sentBefore) {
      const msg = sent[cursor];
      if (msg.type === 'action') {
        current = { motors: [...msg.motors], thrusters: [...msg.thrusters] };
      }
      cursor += 1;
    }
    if (frame.timestep > lastTimestep) {
      log.push({ motors: [...current.motors], thrusters: [...current.thrusters] });
      lastTimestep = frame.timestep;
    }
  }
  return log;
}
