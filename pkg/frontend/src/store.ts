// The suggestion panel store: a pure function of the socket stream plus
// resync snapshots. The DOM layer only ever renders what lives here.

import { SuggestionPayload, WireMessage, referencedCities } from "./protocol.js";

export type CardState = "shown" | "previewing" | "resolved";

export interface Card {
  suggestion: SuggestionPayload;
  ui: CardState;
}

export class SuggestionPanel {
  private cards = new Map<string, Card>(); // insertion order = emission priority
  private listeners: Array<() => void> = [];

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Feed one websocket message. Retractions for unknown ids are ignored. */
  apply(message: WireMessage): void {
    if (message.type === "hello") {
      this.replaceAll(message.payload.pending);
      return;
    }
    if (message.type === "suggestion") {
      this.cards.set(message.payload.suggestion_id, {
        suggestion: message.payload,
        ui: "shown",
      });
      this.notify();
      return;
    }
    if (message.type === "retraction") {
      if (this.cards.delete(message.payload.suggestion_id)) this.notify();
    }
  }

  /** Replace the panel with the engine's pending set (hello or GET resync). */
  replaceAll(pending: SuggestionPayload[]): void {
    this.cards = new Map(
      pending.map((s) => [s.suggestion_id, { suggestion: s, ui: "shown" as CardState }]),
    );
    this.notify();
  }

  /** Accept/reject resolved the suggestion; resolved cards leave the panel. */
  resolve(suggestionId: string): void {
    if (this.cards.delete(suggestionId)) this.notify();
  }

  setPreviewing(suggestionId: string, on: boolean): void {
    const card = this.cards.get(suggestionId);
    if (card && card.ui !== "resolved") {
      card.ui = on ? "previewing" : "shown";
      this.notify();
    }
  }

  list(): Card[] {
    return [...this.cards.values()];
  }

  get(suggestionId: string): Card | undefined {
    return this.cards.get(suggestionId);
  }

  /** City ids to highlight in the plot: everything the visible cards
   * reference, whether rendered as a card or as orienting cues only. */
  highlightedCities(): string[] {
    const out: string[] = [];
    for (const card of this.cards.values()) {
      for (const city of referencedCities(card.suggestion)) {
        if (!out.includes(city)) out.push(city);
      }
    }
    return out;
  }
}
