import { describe, expect, it } from "vitest";

import { EngineClient, SuggestionSocket } from "../src/client.js";
import { SuggestionPanel } from "../src/store.js";
import { suggestion } from "./helpers.js";

function jsonResponse(body: unknown, status = 200) {
  return { ok: status < 400, status, json: () => Promise.resolve(body) };
}

describe("EngineClient", () => {
  it("retries a transient failure once, then succeeds silently", async () => {
    let attempts = 0;
    const client = new EngineClient("http://x", (url) => {
      attempts++;
      if (attempts === 1) return Promise.reject(new Error("conn refused"));
      return Promise.resolve(jsonResponse({ revision: 1 }));
    });
    const result = await client.setMonth("2022-04");
    expect(result).toEqual({ revision: 1 });
    expect(attempts).toBe(2);
  });

  it("surfaces a persistent failure in the status handler", async () => {
    const errors: string[] = [];
    const client = new EngineClient(
      "http://x",
      () => Promise.reject(new Error("down")),
      (message) => errors.push(message),
    );
    await expect(client.pointHovered("oslo")).rejects.toThrow("down");
    expect(errors).toHaveLength(1);
  });

  it("reports HTTP errors without retrying", async () => {
    const errors: string[] = [];
    let attempts = 0;
    const client = new EngineClient(
      "http://x",
      () => {
        attempts++;
        return Promise.resolve(jsonResponse({ detail: "nope" }, 409));
      },
      (message) => errors.push(message),
    );
    await client.accept(suggestion("s1"));
    expect(attempts).toBe(1);
    expect(errors[0]).toContain("409");
  });
});

class FakeSocket {
  onopen: ((ev?: any) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: ((ev?: any) => void) | null = null;
  onerror: ((ev?: any) => void) | null = null;
  close(): void {
    this.onclose?.();
  }
  open(): void {
    this.onopen?.();
  }
  push(message: unknown): void {
    this.onmessage?.({ data: JSON.stringify(message) });
  }
}

describe("SuggestionSocket + panel resync", () => {
  it("resyncs from the REST pending set after a forced reconnect", async () => {
    const panel = new SuggestionPanel();
    const sockets: FakeSocket[] = [];
    const enginePending = [suggestion("a"), suggestion("b")];

    const socket = new SuggestionSocket(
      "ws://x/ws",
      {
        onMessage: (message) => panel.apply(message),
        onOpen: () => panel.replaceAll(enginePending),
      },
      () => {
        const fake = new FakeSocket();
        sockets.push(fake);
        return fake;
      },
      (fn) => fn(), // immediate reconnects for the test
    );
    socket.connect();
    sockets[0].open();
    sockets[0].push({
      type: "suggestion",
      payload: suggestion("live-1"),
    });
    expect(panel.list()).toHaveLength(3);

    // forced disconnect: the engine moved on while we were away
    enginePending.push(suggestion("c"));
    sockets[0].close();
    expect(sockets).toHaveLength(2);
    sockets[1].open();

    expect(panel.list().map((c) => c.suggestion.suggestion_id)).toEqual(
      ["a", "b", "c"],
    );
  });

  it("stops reconnecting after an explicit close", () => {
    const sockets: FakeSocket[] = [];
    const socket = new SuggestionSocket(
      "ws://x/ws",
      { onMessage: () => {}, onOpen: () => {} },
      () => {
        const fake = new FakeSocket();
        sockets.push(fake);
        return fake;
      },
      (fn) => fn(),
    );
    socket.connect();
    sockets[0].open();
    socket.close();
    expect(sockets).toHaveLength(1);
  });
});
