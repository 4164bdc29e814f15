import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import {
  clampAction,
  parseServerMessage,
  reconstructActionLog,
  type ClientMessage,
  type Frame,
  type TranscriptFrame,
} from '../src/protocol.js';

const fixture = JSON.parse(
  readFileSync(new URL('./fixtures/session.json', import.meta.url), 'utf-8'),
);

describe('parseServerMessage', () => {
  it('parses every recorded frame', () => {
    for (const frame of fixture.frames) {
      const parsed = parseServerMessage(JSON.stringify(frame)) as Frame;
      expect(parsed.type).toBe('frame');
      expect(typeof parsed.state_hash).toBe('string');
      expect(parsed.bodies.length).toBeGreaterThan(0);
    }
  });

  it('parses the hello message', () => {
    const hello = parseServerMessage(JSON.stringify(fixture.hello));
    expect(hello.type).toBe('hello');
  });

  it('rejects malformed payloads', () => {
    expect(() => parseServerMessage('{nope')).toThrow();
    expect(() => parseServerMessage('42')).toThrow();
    expect(() => parseServerMessage(JSON.stringify({ type: 'frame', protocol: 99 }))).toThrow();
  });
});

describe('clampAction', () => {
  it('clamps to the action-mode bounds', () => {
    const a = clampAction([2, -3], [1.5, -0.2]);
    expect(a.motors).toEqual([1, -1]);
    expect(a.thrusters).toEqual([1, 0]);
  });
});

describe('reconstructActionLog', () => {
  it('rebuilds the exact action history of the recorded session', () => {
    const frames = fixture.frames.slice(fixture.play_frames_start) as TranscriptFrame[];
    const log = reconstructActionLog(
      fixture.sent as ClientMessage[],
      frames,
      fixture.motor_count,
      fixture.thruster_count,
    );
    expect(log).toEqual(fixture.expected_action_log);
  });

  it('holds the latest action across silent ticks', () => {
    const sent: ClientMessage[] = [
      { type: 'action', motors: [1], thrusters: [0] },
    ];
    const mkFrame = (timestep: number, sentBefore: number): TranscriptFrame =>
      ({
        type: 'frame', protocol: 1, tick: timestep, timestep, mode: 'paused',
        reward: 0, done: false, state_hash: 'x', bodies: [], joints: [], thrusters: [],
        sentBefore,
      }) as TranscriptFrame;
    const log = reconstructActionLog(sent, [mkFrame(1, 1), mkFrame(2, 1), mkFrame(3, 1)], 1, 1);
    expect(log).toEqual([
      { motors: [1], thrusters: [0] },
      { motors: [1], thrusters: [0] },
      { motors: [1], thrusters: [0] },
    ]);
  });
});
