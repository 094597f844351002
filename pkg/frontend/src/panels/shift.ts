// Phrase-shift panel: horizontal bars in export order, positive rightward.

import { shiftBarLayout } from "../layout.js";
import { ShiftExport } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderShift(
  container: HTMLElement,
  shift: ShiftExport | null,
  width = 360,
): void {
  container.replaceChildren();
  const title = document.createElement("h3");
  title.textContent = shift
    ? `phrase shift - ${shift.mode} (${shift.doc_count} tweets)`
    : "phrase shift";
  container.appendChild(title);
  if (!shift) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "no shift for this selection";
    container.appendChild(empty);
    return;
  }
  const layout = shiftBarLayout(shift.entries, width);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(layout.width));
  svg.setAttribute("height", String(Math.max(layout.height, 20)));
  const axis = document.createElementNS(SVG_NS, "line");
  axis.setAttribute("x1", String(layout.axisX));
  axis.setAttribute("x2", String(layout.axisX));
  axis.setAttribute("y1", "0");
  axis.setAttribute("y2", String(layout.height));
  axis.setAttribute("class", "shift-axis");
  svg.appendChild(axis);
  for (const bar of layout.bars) {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(bar.x));
    rect.setAttribute("y", String(bar.y));
    rect.setAttribute("width", String(bar.width));
    rect.setAttribute("height", String(bar.height));
    rect.setAttribute("class", bar.positive ? "bar-positive" : "bar-negative");
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = `${bar.phrase}: ${bar.contribution.toFixed(3)} (freq ${bar.frequency})`;
    rect.appendChild(tooltip);
    svg.appendChild(rect);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute(
      "x",
      String(bar.positive ? bar.x + bar.width + 4 : bar.x - 4),
    );
    label.setAttribute("y", String(bar.y + bar.height - 4));
    label.setAttribute("text-anchor", bar.positive ? "start" : "end");
    label.setAttribute("class", "bar-label");
    label.textContent = bar.phrase;
    svg.appendChild(label);
  }
  container.appendChild(svg);
  if (shift.truncated) {
    const note = document.createElement("p");
    note.className = "note";
    note.textContent = `top ${shift.entries.length} shown; full total ${shift.total.toFixed(3)}`;
    container.appendChild(note);
  }
}
