/**
 * Thin websocket wrapper with an injectable socket, so the app logic and
 * tests share one code path.
 */

import { encodeClientMessage, type ClientMessage } from './protocol.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export class Transport {
  private socket: SocketLike;
  readonly sent: ClientMessage[] = [];

  constructor(socket: SocketLike) {
    this.socket = socket;
  }

  send(msg: ClientMessage): void {
    this.sent.push(msg);
    this.socket.send(encodeClientMessage(msg));
  }

  onText(handler: (text: string) => void): void {
    this.socket.onmessage = (ev) => handler(ev.data);
  }

  close(): void {
    this.socket.close();
  }
}
