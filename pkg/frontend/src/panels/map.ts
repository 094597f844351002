// Map panel: each cluster is a circle sized by its spatial extent, with a
// red wedge equal to the positive-classification fraction for the active
// mode. No tiles: clusters are the subject, not the basemap.

import { arcPath, mapLayout } from "../layout.js";
import { ViewState } from "../state.js";
import { ClusterWindow } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderMap(
  container: HTMLElement,
  window: ClusterWindow | null,
  state: ViewState,
  onSelectCluster: (id: number | null) => void,
  width = 420,
  height = 340,
): void {
  container.replaceChildren();
  const title = document.createElement("h3");
  title.textContent = window
    ? `clusters ${window.start} (${window.clusters.length} clusters, ` +
      `${window.noise_count} noise)`
    : "clusters";
  container.appendChild(title);
  if (!window || window.clusters.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "no clusters in this window";
    container.appendChild(empty);
    return;
  }
  const layout = mapLayout(
    window.clusters,
    state.mode,
    width,
    height,
    state.viewport,
    state.viewport?.zoom ?? 1,
  );
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "map");
  for (const circle of layout.circles) {
    const group = document.createElementNS(SVG_NS, "g");
    const disc = document.createElementNS(SVG_NS, "circle");
    disc.setAttribute("cx", String(circle.cx));
    disc.setAttribute("cy", String(circle.cy));
    disc.setAttribute("r", String(circle.r));
    disc.setAttribute(
      "class",
      circle.id === state.cluster ? "cluster selected" : "cluster",
    );
    group.appendChild(disc);
    const wedge = document.createElementNS(SVG_NS, "path");
    wedge.setAttribute("d", arcPath(circle.cx, circle.cy, circle.r, circle.fraction));
    wedge.setAttribute("class", "cluster-positive");
    group.appendChild(wedge);
    const info = window.clusters.find((c) => c.id === circle.id);
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent =
      `cluster ${circle.id}: ${info?.count ?? 0} tweets, ` +
      `${(circle.fraction * 100).toFixed(0)}% ${state.mode}`;
    group.appendChild(tooltip);
    group.addEventListener("click", () =>
      onSelectCluster(circle.id === state.cluster ? null : circle.id),
    );
    svg.appendChild(group);
  }
  container.appendChild(svg);
  const scale = document.createElement("p");
  scale.className = "note";
  scale.textContent = `${Math.round(layout.metersPerPixel * 50)} m per 50 px`;
  container.appendChild(scale);
}
