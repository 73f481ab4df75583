// Wire types for the guidance engine's REST + websocket surface.

export interface SuggestionPayload {
  suggestion_id: string;
  strategy: string;
  action_id: string;
  degree: string; // orienting | directing | prescribing
  content: any;
  title: string;
  description: string;
  created_revision: number;
  created_at: number;
  status: string;
}

export interface HelloPayload {
  engine: string;
  revision: number;
  active_strategies: string[];
  pending: SuggestionPayload[];
}

export type WireMessage =
  | { type: "hello"; payload: HelloPayload }
  | { type: "suggestion"; payload: SuggestionPayload }
  | { type: "retraction"; payload: { suggestion_id: string } };

/** City ids a suggestion refers to (similarity uses content.cities, the
 * zoom pattern uses content.points). */
export function referencedCities(suggestion: SuggestionPayload): string[] {
  const content = suggestion.content;
  if (content && Array.isArray(content.cities)) return content.cities as string[];
  if (content && Array.isArray(content.points)) return content.points as string[];
  return [];
}

export function suggestedMonth(suggestion: SuggestionPayload): string | null {
  const content = suggestion.content;
  if (suggestion.action_id === "suggest_month" && content && typeof content.month === "string") {
    return content.month;
  }
  return null;
}
