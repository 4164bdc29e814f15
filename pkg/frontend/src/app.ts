/**
 * Browser entry point: wires the websocket, keyboard, canvas and editor
 * toolbar together. All decision logic lives in the pure modules.
 */

import { actionFromKeys, emptyKeymapState, keyDown, keyUp } from './keymap.js';
import { renderFrame } from './renderer.js';
import { applyServerText, initialState, noteSent, stageAction, type Tool } from './state.js';
import { toolToOp } from './editor.js';
import { Transport, type SocketLike } from './transport.js';
import { ARENA_SIZE, VIEW_MARGIN } from './renderer.js';
import type { ClientMessage, Mode } from './protocol.js';

const canvas = document.getElementById('arena') as HTMLCanvasElement;
const ctx = canvas.getContext('2d')!;
const statusEl = document.getElementById('status')!;
const errorEl = document.getElementById('error')!;
const levelInput = document.getElementById('level-path') as HTMLInputElement;

const state = initialState();
const keys = emptyKeymapState(9);

const wsUrl = `${location.protocol === 'https:' ? 'wss' : 'ws'}://${location.host}/ws`;
const transport = new Transport(new WebSocket(wsUrl) as unknown as SocketLike);

function send(msg: ClientMessage): void {
  transport.send(msg);
  noteSent(state, msg);
}

transport.onText((text) => {
  const msg = applyServerText(state, text);
  if (state.lastError) {
    errorEl.textContent = `${state.lastError.code}: ${state.lastError.detail}`;
  }
  if (msg && msg.type === 'frame') {
    renderFrame(ctx, msg, canvas.width, canvas.height);
    statusEl.textContent = `session ${state.session ?? '...'} | mode ${msg.mode} | hash ${msg.state_hash}`;
  }
  if (msg && msg.type === 'level_doc') {
    const blob = new Blob([JSON.stringify(msg.doc, null, 2)], { type: 'application/json' });
    const a = document.createElement('a');
    a.href = URL.createObjectURL(blob);
    a.download = 'level.json';
    a.click();
  }
});

// one staged action per local tick at most; unchanged actions are not resent
setInterval(() => {
  if (!state.latestFrame || state.latestFrame.mode !== 'play') return;
  const { motors, thrusters } = actionFromKeys(keys, state.latestFrame, state.motorCount, state.thrusterCount);
  const msg = stageAction(state, motors, thrusters);
  if (msg) send(msg);
}, 1000 / 30);

window.addEventListener('keydown', (ev) => {
  if (ev.key === 'r') send({ type: 'reset' });
  else if (ev.key === 'p') setMode('play');
  else if (ev.key === 'e') setMode('edit');
  else if (ev.key === ' ') setMode('paused');
  else keyDown(keys, ev.key);
});
window.addEventListener('keyup', (ev) => keyUp(keys, ev.key));

function setMode(mode: Mode): void {
  send({ type: 'set_mode', mode });
}

canvas.addEventListener('click', (ev) => {
  if (!state.latestFrame || state.latestFrame.mode !== 'edit') return;
  const rect = canvas.getBoundingClientRect();
  const view = ARENA_SIZE + 2 * VIEW_MARGIN;
  const scale = Math.min(canvas.width, canvas.height) / view;
  const wx = (ev.clientX - rect.left) * (canvas.width / rect.width) / scale - VIEW_MARGIN;
  const wy = (canvas.height - (ev.clientY - rect.top) * (canvas.height / rect.height)) / scale - VIEW_MARGIN;
  const op = toolToOp(state.tool, state.latestFrame, { x: wx, y: wy });
  if (op) send(op);
});

document.querySelectorAll<HTMLButtonElement>('[data-tool]').forEach((button) => {
  button.addEventListener('click', () => {
    state.tool = button.dataset.tool as Tool;
  });
});
document.getElementById('load')!.addEventListener('click', () => {
  send({ type: 'load_level', path: levelInput.value });
});
document.getElementById('save')!.addEventListener('click', () => send({ type: 'save' }));
