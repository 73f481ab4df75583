import { describe, expect, it } from "vitest";

import { WireMessage } from "../src/protocol.js";
import { SuggestionPanel } from "../src/store.js";
import { suggestion } from "./helpers.js";

describe("SuggestionPanel", () => {
  it("hello replaces the panel with the pending set", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("old") });
    const hello: WireMessage = {
      type: "hello",
      payload: {
        engine: "guidekit", revision: 3, active_strategies: [],
        pending: [suggestion("a"), suggestion("b")],
      },
    };
    panel.apply(hello);
    expect(panel.list().map((c) => c.suggestion.suggestion_id)).toEqual(["a", "b"]);
  });

  it("keeps emission order and removes on retraction", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.apply({ type: "suggestion", payload: suggestion("s2") });
    panel.apply({ type: "retraction", payload: { suggestion_id: "s1" } });
    expect(panel.list().map((c) => c.suggestion.suggestion_id)).toEqual(["s2"]);
  });

  it("ignores retractions for unknown ids", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.apply({ type: "retraction", payload: { suggestion_id: "ghost" } });
    expect(panel.list()).toHaveLength(1);
  });

  it("resolved cards leave the panel", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.resolve("s1");
    expect(panel.list()).toEqual([]);
  });

  it("highlights the union of referenced cities including zoom points", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.apply({
      type: "suggestion",
      payload: suggestion("s2", {
        action_id: "suggest_zoom",
        content: { view: "zoom", points: ["oslo", "malaga"] },
      }),
    });
    expect(panel.highlightedCities()).toEqual(["malaga", "palermo", "oslo"]);
  });

  it("retraction clears its highlights", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.apply({ type: "retraction", payload: { suggestion_id: "s1" } });
    expect(panel.highlightedCities()).toEqual([]);
  });

  it("preview state toggles without touching other cards", () => {
    const panel = new SuggestionPanel();
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.apply({ type: "suggestion", payload: suggestion("s2") });
    panel.setPreviewing("s1", true);
    expect(panel.get("s1")?.ui).toBe("previewing");
    expect(panel.get("s2")?.ui).toBe("shown");
    panel.setPreviewing("s1", false);
    expect(panel.get("s1")?.ui).toBe("shown");
  });

  it("notifies listeners on every change", () => {
    const panel = new SuggestionPanel();
    let renders = 0;
    panel.onChange(() => renders++);
    panel.apply({ type: "suggestion", payload: suggestion("s1") });
    panel.apply({ type: "retraction", payload: { suggestion_id: "s1" } });
    panel.replaceAll([]);
    expect(renders).toBe(3);
  });
});
