import { SuggestionPayload } from "../src/protocol.js";

export function suggestion(
  id: string,
  overrides: Partial<SuggestionPayload> = {},
): SuggestionPayload {
  return {
    suggestion_id: id,
    strategy: "similar_cities",
    action_id: "highlight_similar",
    degree: "directing",
    content: { cities: ["malaga", "palermo"], month: "2022-04" },
    title: "Look at similar cities",
    description: "desc",
    created_revision: 1,
    created_at: 1.0,
    status: "pending",
    ...overrides,
  };
}
