// WebSocket session client with reconnect. The constructor is injectable
// so tests can drive it from node with the `ws` package.

import type { ClientMessage, ServerMessage } from "./types.js";
import type { SessionStatus } from "./viewState.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SessionOptions {
  variant: string;
  revision: string;
  speed?: number;
}

export class SessionClient {
  private socket: SocketLike | null = null;
  private closed = false;
  private retryMs = 500;

  onMessage: (msg: ServerMessage) => void = () => undefined;
  onStatus: (status: SessionStatus) => void = () => undefined;

  constructor(
    private readonly baseUrl: string,
    private readonly options: SessionOptions,
    private readonly factory: SocketFactory = (url) =>
      new (globalThis as { WebSocket: new (u: string) => SocketLike }).WebSocket(url)
  ) {}

  url(): string {
    const q = new URLSearchParams({
      variant: this.options.variant,
      revision: this.options.revision,
    });
    if (this.options.speed !== undefined) q.set("speed", String(this.options.speed));
    return `${this.baseUrl}/session?${q.toString()}`;
  }

  connect(): void {
    this.closed = false;
    this.onStatus("connecting");
    this.open();
  }

  private open(): void {
    const socket = this.factory(this.url());
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 500;
      this.onStatus("connected");
    };
    socket.onmessage = (ev) => {
      this.onMessage(JSON.parse(String(ev.data)) as ServerMessage);
    };
    socket.onerror = () => undefined;
    socket.onclose = () => {
      if (this.closed) {
        this.onStatus("closed");
        return;
      }
      this.onStatus("reconnecting");
      const delay = this.retryMs;
      this.retryMs = Math.min(this.retryMs * 2, 8000);
      setTimeout(() => {
        if (!this.closed) this.open();
      }, delay);
    };
  }

  send(msg: ClientMessage): void {
    if (this.socket !== null) {
      try {
        this.socket.send(JSON.stringify(msg));
      } catch {
        // Socket mid-reconnect; samples are disposable.
      }
    }
  }

  close(): void {
    this.closed = true;
    if (this.socket !== null) this.socket.close();
  }
}
