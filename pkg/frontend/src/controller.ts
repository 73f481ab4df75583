// Gesture coordination: every user gesture maps to at most one API call,
// and interaction ordering contracts (preview-end before accept) live here
// so the DOM layer stays trivial.

import { EngineClient } from "./client.js";
import { debounce } from "./debounce.js";
import { suggestedMonth } from "./protocol.js";
import { SuggestionPanel } from "./store.js";

export class DemoController {
  favorites: string[] = [];
  onMonthAccepted: (month: string) => void = () => {};

  private debouncedMonth: (month: string) => void;

  constructor(
    private client: EngineClient,
    private panel: SuggestionPanel,
    sliderDebounceMs = 250,
  ) {
    this.debouncedMonth = debounce((month: string) => {
      void this.client.setMonth(month);
    }, sliderDebounceMs);
  }

  /** Slider drags collapse to one update per released position. */
  monthChanged(month: string): void {
    this.debouncedMonth(month);
  }

  /** One callback invocation per pointer-enter. */
  hoverPoint(pointId: string): void {
    void this.client.pointHovered(pointId);
  }

  /** Toggling always sends the full favorites list. */
  toggleFavorite(city: string): void {
    this.favorites = this.favorites.includes(city)
      ? this.favorites.filter((c) => c !== city)
      : [...this.favorites, city];
    void this.client.setFavorites([...this.favorites]);
  }

  async startPreview(suggestionId: string): Promise<void> {
    const card = this.panel.get(suggestionId);
    if (!card || card.ui !== "shown") return;
    this.panel.setPreviewing(suggestionId, true);
    await this.client.previewStart(card.suggestion);
  }

  async endPreview(suggestionId: string): Promise<void> {
    const card = this.panel.get(suggestionId);
    if (!card || card.ui !== "previewing") return;
    this.panel.setPreviewing(suggestionId, false);
    await this.client.previewEnd(card.suggestion);
  }

  async accept(suggestionId: string): Promise<void> {
    const card = this.panel.get(suggestionId);
    if (!card) return;
    if (card.ui === "previewing") {
      // preview-end first, then accept: the engine sees a closed preview
      await this.endPreview(suggestionId);
    }
    await this.client.accept(card.suggestion);
    this.panel.resolve(suggestionId);
    const month = suggestedMonth(card.suggestion);
    if (month !== null) this.onMonthAccepted(month);
  }

  async reject(suggestionId: string): Promise<void> {
    const card = this.panel.get(suggestionId);
    if (!card) return;
    if (card.ui === "previewing") {
      await this.endPreview(suggestionId);
    }
    await this.client.reject(card.suggestion);
    this.panel.resolve(suggestionId);
  }
}
