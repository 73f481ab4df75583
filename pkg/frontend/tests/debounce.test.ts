import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires once with the last value of a burst", () => {
    const calls: string[] = [];
    const fire = debounce((v: string) => calls.push(v), 250);
    fire("2022-02");
    vi.advanceTimersByTime(100);
    fire("2022-03");
    vi.advanceTimersByTime(100);
    fire("2022-04");
    vi.advanceTimersByTime(250);
    expect(calls).toEqual(["2022-04"]);
  });

  it("separate settled gestures each fire", () => {
    const calls: number[] = [];
    const fire = debounce((v: number) => calls.push(v), 100);
    fire(1);
    vi.advanceTimersByTime(150);
    fire(2);
    vi.advanceTimersByTime(150);
    expect(calls).toEqual([1, 2]);
  });
});
