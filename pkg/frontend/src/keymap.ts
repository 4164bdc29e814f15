/**
 * Keyboard mapping, documented in-app:
 *   - number row 1..9 toggles the thruster in that slot on/off
 *   - motor bindings are driven by key pairs, forward/backward:
 *     binding 0: A / Z, binding 1: S / X, binding 2: D / C, binding 3: F / V
 *   - holding both keys of a pair cancels to 0
 *   - no keys held means the no-op action
 */

import type { Frame } from './protocol.js';

export const MOTOR_KEY_PAIRS: [string, string][] = [
  ['a', 'z'],
  ['s', 'x'],
  ['d', 'c'],
  ['f', 'v'],
];

export interface KeymapState {
  held: Set<string>;
  thrusterToggles: boolean[];
}

export function emptyKeymapState(thrusterCount: number): KeymapState {
  return { held: new Set(), thrusterToggles: new Array(thrusterCount).fill(false) };
}

/** Track a key-down; digit keys flip the matching thruster toggle. */
export function keyDown(state: KeymapState, key: string): void {
  const k = key.toLowerCase();
  if (!state.held.has(k)) {
    const digit = parseInt(k, 10);
    if (!Number.isNaN(digit) && digit >= 1 && digit <= state.thrusterToggles.length) {
      state.thrusterToggles[digit - 1] = !state.thrusterToggles[digit - 1];
    }
  }
  state.held.add(k);
}

export function keyUp(state: KeymapState, key: string): void {
  state.held.delete(key.toLowerCase());
}

/** Deterministic action for the currently held keys and toggles. */
export function actionFromKeys(
  state: KeymapState,
  frame: Frame | null,
  motorCount: number,
  thrusterCount: number,
): { motors: number[]; thrusters: number[] } {
  const motors = new Array(motorCount).fill(0);
  const thrusters = new Array(thrusterCount).fill(0);

  const bindingValue = MOTOR_KEY_PAIRS.map(([fwd, back]) => {
    const f = state.held.has(fwd) ? 1 : 0;
    const b = state.held.has(back) ? 1 : 0;
    return f - b; // both held cancels to 0
  });
  if (frame) {
    for (const joint of frame.joints) {
      if (joint.slot < motorCount && joint.motor_on) {
        motors[joint.slot] = bindingValue[joint.binding % MOTOR_KEY_PAIRS.length];
      }
    }
  }
  for (let t = 0; t < thrusterCount; t += 1) {
    thrusters[t] = state.thrusterToggles[t] ? 1 : 0;
  }
  return { motors, thrusters };
}
