// SVG scatter plot of city weather: temperature on x, precipitation on y.

export interface CityRow {
  city: string;
  month: string;
  temperature: number;
  precipitation: number;
  wind: number;
  humidity: number;
}

/** Parse the demo CSV (simple comma-separated values, no quoting). */
export function parseWeatherCsv(text: string): CityRow[] {
  const lines = text.trim().split("\n");
  const header = lines[0].split(",");
  return lines.slice(1).map((line) => {
    const cells = line.split(",");
    const row: any = {};
    header.forEach((name, i) => {
      const value = Number(cells[i]);
      row[name] = Number.isFinite(value) && cells[i] !== "" ? value : cells[i];
    });
    return row as CityRow;
  });
}

const WIDTH = 640;
const HEIGHT = 420;
const PAD = 40;

export interface ScatterCallbacks {
  onHover(city: string): void;
  onToggleFavorite(city: string): void;
}

export class ScatterPlot {
  constructor(
    private svg: SVGSVGElement,
    private rows: CityRow[],
    private callbacks: ScatterCallbacks,
  ) {
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  }

  render(month: string, favorites: string[], highlighted: string[], previewed: string[]): void {
    const doc = this.svg.ownerDocument;
    this.svg.textContent = "";
    const visible = this.rows.filter((r) => r.month === month);
    if (!visible.length) return;
    const xs = visible.map((r) => r.temperature);
    const ys = visible.map((r) => r.precipitation);
    const xMin = Math.min(...xs), xMax = Math.max(...xs);
    const yMin = Math.min(...ys), yMax = Math.max(...ys);
    const sx = (v: number) =>
      PAD + ((v - xMin) / (xMax - xMin || 1)) * (WIDTH - 2 * PAD);
    const sy = (v: number) =>
      HEIGHT - PAD - ((v - yMin) / (yMax - yMin || 1)) * (HEIGHT - 2 * PAD);

    for (const row of visible) {
      const group = doc.createElementNS("http://www.w3.org/2000/svg", "g");
      const circle = doc.createElementNS("http://www.w3.org/2000/svg", "circle");
      circle.setAttribute("cx", String(sx(row.temperature)));
      circle.setAttribute("cy", String(sy(row.precipitation)));
      circle.setAttribute("r", "7");
      circle.dataset.city = row.city;
      const classes = ["city"];
      if (favorites.includes(row.city)) classes.push("favorite");
      if (highlighted.includes(row.city)) classes.push("highlighted");
      if (previewed.includes(row.city)) classes.push("previewed");
      circle.setAttribute("class", classes.join(" "));
      circle.addEventListener("pointerenter", () => this.callbacks.onHover(row.city));
      circle.addEventListener("click", () => this.callbacks.onToggleFavorite(row.city));
      const label = doc.createElementNS("http://www.w3.org/2000/svg", "text");
      label.setAttribute("x", String(sx(row.temperature) + 9));
      label.setAttribute("y", String(sy(row.precipitation) + 4));
      label.setAttribute("class", "city-label");
      label.textContent = row.city;
      group.appendChild(circle);
      group.appendChild(label);
      this.svg.appendChild(group);
    }
  }
}
