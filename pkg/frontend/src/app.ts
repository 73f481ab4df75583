// Browser wiring: DOM events in, store renders out. All behavior lives in
// the controller/store/client modules; this file only connects them.

import { EngineClient, SuggestionSocket } from "./client.js";
import { DemoController } from "./controller.js";
import { referencedCities } from "./protocol.js";
import { parseWeatherCsv, ScatterPlot } from "./scatter.js";
import { SuggestionPanel } from "./store.js";

const params = new URLSearchParams(location.search);
const engineBase = params.get("engine") ?? location.origin;
const wsBase = engineBase.replace(/^http/, "ws");

const statusBar = document.getElementById("status") as HTMLElement;
const slider = document.getElementById("month") as HTMLInputElement;
const monthLabel = document.getElementById("month-label") as HTMLElement;
const panelHost = document.getElementById("panel") as HTMLElement;
const favoritesHost = document.getElementById("favorites") as HTMLElement;
const svg = document.getElementById("plot") as unknown as SVGSVGElement;

const panel = new SuggestionPanel();
const client = new EngineClient(engineBase, undefined, (message) => {
  statusBar.textContent = message;
});
const controller = new DemoController(client, panel);

function monthOf(sliderValue: string): string {
  return `2022-${String(sliderValue).padStart(2, "0")}`;
}

let currentMonth = monthOf(slider.value);
let plot: ScatterPlot | null = null;

function previewedCities(): string[] {
  const previewing = panel.list().filter((card) => card.ui === "previewing");
  return previewing.flatMap((card) => referencedCities(card.suggestion));
}

function render(): void {
  monthLabel.textContent = currentMonth;
  plot?.render(currentMonth, controller.favorites, panel.highlightedCities(), previewedCities());
  favoritesHost.textContent = controller.favorites.join(", ") || "none yet";
  renderPanel();
}

function renderPanel(): void {
  panelHost.textContent = "";
  // Orienting suggestions stay cues-only in the plot; directing suggestions
  // are ranked cards in emission order; a prescribing suggestion gets one
  // modal-style card.
  for (const card of panel.list()) {
    if (card.suggestion.degree === "orienting") continue;
    const element = document.createElement("div");
    element.className =
      card.suggestion.degree === "prescribing" ? "card modal" : "card";
    if (card.ui === "previewing") element.classList.add("previewing");
    const title = document.createElement("h3");
    title.textContent = card.suggestion.title;
    const description = document.createElement("p");
    description.textContent = card.suggestion.description;
    const actions = document.createElement("div");
    actions.className = "actions";
    const acceptButton = document.createElement("button");
    acceptButton.textContent = "Accept";
    acceptButton.addEventListener("click", () => {
      void controller.accept(card.suggestion.suggestion_id).then(render);
    });
    const rejectButton = document.createElement("button");
    rejectButton.textContent = "Reject";
    rejectButton.addEventListener("click", () => {
      void controller.reject(card.suggestion.suggestion_id).then(render);
    });
    actions.append(acceptButton, rejectButton);
    element.append(title, description, actions);
    element.addEventListener("pointerenter", () => {
      void controller.startPreview(card.suggestion.suggestion_id).then(render);
    });
    element.addEventListener("pointerleave", () => {
      void controller.endPreview(card.suggestion.suggestion_id).then(render);
    });
    panelHost.appendChild(element);
  }
}

controller.onMonthAccepted = (month) => {
  currentMonth = month;
  slider.value = String(Number(month.slice(5)));
  void client.setMonth(month);
  render();
};

slider.addEventListener("input", () => {
  currentMonth = monthOf(slider.value);
  controller.monthChanged(currentMonth);
  render();
});

panel.onChange(render);

async function boot(): Promise<void> {
  const csv = await fetch("./public/weather.csv").then((response) => response.text());
  plot = new ScatterPlot(svg, parseWeatherCsv(csv), {
    onHover: (city) => controller.hoverPoint(city),
    onToggleFavorite: (city) => {
      controller.toggleFavorite(city);
      render();
    },
  });
  const socket = new SuggestionSocket(`${wsBase}/ws`, {
    onMessage: (message) => panel.apply(message),
    onOpen: () => {
      void client.pendingSuggestions().then((pending) => panel.replaceAll(pending));
    },
    onStatus: (connected) => {
      statusBar.textContent = connected ? "connected" : "reconnecting…";
    },
  });
  socket.connect();
  render();
}

void boot();
