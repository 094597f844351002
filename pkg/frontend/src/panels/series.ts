// Time-series panel: one polyline per selected mode; clicking a point (or
// anywhere on its hour column) selects that window.

import { seriesLayout } from "../layout.js";
import { SeriesExport, WindowInfo } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const LINE_CLASSES: Record<string, string> = {
  collective_force: "line-cf",
  collective_peace: "line-cp",
  singular_force: "line-sf",
  singular_peace: "line-sp",
};

export function renderSeries(
  container: HTMLElement,
  series: SeriesExport | null,
  windows: WindowInfo[],
  modes: string[],
  selectedWindow: string | null,
  onSelectWindow: (start: string) => void,
  width = 800,
  height = 180,
): void {
  container.replaceChildren();
  const title = document.createElement("h3");
  title.textContent = "presence by hour (sum of posteriors)";
  container.appendChild(title);
  if (!series || series.bins.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "no series data";
    container.appendChild(empty);
    return;
  }
  const layout = seriesLayout(series.bins, modes, width, height);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "series");
  const selectable = new Set(windows.map((w) => w.start));

  if (selectedWindow) {
    const index = series.bins.findIndex((b) => b.start === selectedWindow);
    if (index >= 0) {
      const marker = document.createElementNS(SVG_NS, "rect");
      const x = layout.xOfBin(index);
      marker.setAttribute("x", String(x - 6));
      marker.setAttribute("y", "0");
      marker.setAttribute("width", "12");
      marker.setAttribute("height", String(height));
      marker.setAttribute("class", "selected-bin");
      svg.appendChild(marker);
    }
  }

  for (const [mode, points] of layout.lines) {
    const line = document.createElementNS(SVG_NS, "polyline");
    line.setAttribute(
      "points",
      points.map((p) => `${p.x},${p.y}`).join(" "),
    );
    line.setAttribute("class", `series-line ${LINE_CLASSES[mode] ?? "line-other"}`);
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = mode;
    line.appendChild(tooltip);
    svg.appendChild(line);
    for (const point of points) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(point.x));
      dot.setAttribute("cy", String(point.y));
      dot.setAttribute("r", "2.5");
      dot.setAttribute("class", `series-dot ${LINE_CLASSES[mode] ?? "line-other"}`);
      svg.appendChild(dot);
    }
  }

  svg.addEventListener("click", (event) => {
    const rect = svg.getBoundingClientRect();
    const index = layout.binAt(event.clientX - rect.left);
    const start = series.bins[index]?.start;
    if (start && selectable.has(start)) onSelectWindow(start);
  });
  container.appendChild(svg);
}
