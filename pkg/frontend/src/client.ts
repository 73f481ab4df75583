// REST client and reconnecting socket for the guidance engine.

import { SuggestionPayload, WireMessage } from "./protocol.js";

type FetchLike = (url: string, init?: any) => Promise<{ ok: boolean; status: number; json(): Promise<any> }>;

export class EngineClient {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
    private onError: (message: string) => void = () => {},
  ) {}

  /** POST once; a transient failure is retried once, then surfaced. */
  private async post(path: string, body: unknown): Promise<any> {
    const init = {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    };
    for (let attempt = 0; ; attempt++) {
      try {
        const response = await this.fetchFn(this.base + path, init);
        if (!response.ok) {
          this.onError(`${path} failed with ${response.status}`);
          return null;
        }
        return await response.json();
      } catch (err) {
        if (attempt >= 1) {
          this.onError(`${path} unreachable`);
          throw err;
        }
      }
    }
  }

  setMonth(month: string): Promise<any> {
    return this.post("/api/state/properties", { month });
  }

  setFavorites(favorites: string[]): Promise<any> {
    return this.post("/api/state/properties", { favorites });
  }

  pointHovered(pointId: string): Promise<any> {
    return this.post("/api/state/callbacks/point_hovered", { point_id: pointId });
  }

  /** Interaction endpoints take the full suggestion message as payload. */
  accept(suggestion: SuggestionPayload): Promise<any> {
    return this.post("/api/suggestions/accept", suggestion);
  }

  reject(suggestion: SuggestionPayload): Promise<any> {
    return this.post("/api/suggestions/reject", suggestion);
  }

  previewStart(suggestion: SuggestionPayload): Promise<any> {
    return this.post("/api/suggestions/preview-start", suggestion);
  }

  previewEnd(suggestion: SuggestionPayload): Promise<any> {
    return this.post("/api/suggestions/preview-end", suggestion);
  }

  async pendingSuggestions(): Promise<SuggestionPayload[]> {
    const response = await this.fetchFn(this.base + "/api/suggestions");
    return response.json();
  }
}

interface SocketLike {
  onopen: ((ev?: any) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev?: any) => void) | null;
  onerror: ((ev?: any) => void) | null;
  close(): void;
}

export interface SocketHandlers {
  onMessage(message: WireMessage): void;
  /** Called after every (re)connect; resync the panel from the REST API here. */
  onOpen(): void;
  onStatus?(connected: boolean): void;
}

export class SuggestionSocket {
  private socket: SocketLike | null = null;
  private closed = false;
  private retryMs = 500;

  constructor(
    private url: string,
    private handlers: SocketHandlers,
    private factory: (url: string) => SocketLike = (url) => new WebSocket(url) as any,
    private schedule: (fn: () => void, ms: number) => void = (fn, ms) => {
      setTimeout(fn, ms);
    },
  ) {}

  connect(): void {
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 500;
      this.handlers.onStatus?.(true);
      this.handlers.onOpen();
    };
    socket.onmessage = (ev) => {
      this.handlers.onMessage(JSON.parse(ev.data) as WireMessage);
    };
    socket.onerror = () => {};
    socket.onclose = () => {
      this.handlers.onStatus?.(false);
      if (this.closed) return;
      this.schedule(() => this.connect(), this.retryMs);
      this.retryMs = Math.min(this.retryMs * 2, 8000);
    };
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
