import { describe, expect, it } from 'vitest';

import { actionFromKeys, emptyKeymapState, keyDown, keyUp } from '../src/keymap.js';
import type { Frame } from '../src/protocol.js';

function frameWithJoints(bindings: number[]): Frame {
  return {
    type: 'frame', protocol: 1, tick: 0, timestep: 0, mode: 'play',
    reward: 0, done: false, state_hash: '', bodies: [], thrusters: [],
    joints: bindings.map((binding, slot) => ({
      slot, body_a: 0, body_b: 1, world_anchor: [0, 0] as [number, number],
      is_fixed: false, motor_on: true, binding,
    })),
  };
}

describe('actionFromKeys', () => {
  it('no keys held is the no-op action', () => {
    const state = emptyKeymapState(2);
    const { motors, thrusters } = actionFromKeys(state, frameWithJoints([0, 1]), 2, 2);
    expect(motors).toEqual([0, 0]);
    expect(thrusters).toEqual([0, 0]);
  });

  it('forward key drives +1 on that motor binding', () => {
    const state = emptyKeymapState(2);
    keyDown(state, 'a');
    const { motors } = actionFromKeys(state, frameWithJoints([0, 1]), 2, 2);
    expect(motors).toEqual([1, 0]);
  });

  it('both keys of a pair cancel to 0', () => {
    const state = emptyKeymapState(2);
    keyDown(state, 's');
    keyDown(state, 'x');
    const { motors } = actionFromKeys(state, frameWithJoints([1, 1]), 2, 2);
    expect(motors).toEqual([0, 0]);
    keyUp(state, 'x');
    expect(actionFromKeys(state, frameWithJoints([1, 1]), 2, 2).motors).toEqual([1, 1]);
  });

  it('joints sharing a binding move together', () => {
    const state = emptyKeymapState(2);
    keyDown(state, 'z');
    const { motors } = actionFromKeys(state, frameWithJoints([0, 0]), 2, 2);
    expect(motors).toEqual([-1, -1]);
  });

  it('number keys toggle thrusters on and off', () => {
    const state = emptyKeymapState(2);
    keyDown(state, '1');
    expect(actionFromKeys(state, null, 2, 2).thrusters).toEqual([1, 0]);
    keyUp(state, '1');
    // still on: digits toggle rather than hold
    expect(actionFromKeys(state, null, 2, 2).thrusters).toEqual([1, 0]);
    keyDown(state, '2');
    expect(actionFromKeys(state, null, 2, 2).thrusters).toEqual([1, 1]);
    keyUp(state, '2');
    keyDown(state, '1');
    expect(actionFromKeys(state, null, 2, 2).thrusters).toEqual([0, 1]);
  });

  it('holding a digit does not retoggle', () => {
    const state = emptyKeymapState(1);
    keyDown(state, '1');
    keyDown(state, '1'); // key repeat while held
    expect(actionFromKeys(state, null, 1, 1).thrusters).toEqual([1]);
  });
});
