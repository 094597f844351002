// Explorer wiring: ViewState lives in the URL hash; every state change
// triggers one fetch per affected panel, and stale responses are discarded
// by sequence number so late arrivals never overwrite a newer view.

import { ApiError, fetchClusters, fetchSeries, fetchShift, fetchWindows } from "./api.js";
import { decodeState, encodeState, ViewState } from "./state.js";
import { renderMap } from "./panels/map.js";
import { renderSeries } from "./panels/series.js";
import { renderShift } from "./panels/shift.js";
import { ClusterWindow, MODES, Mode, SeriesExport, WindowInfo } from "./types.js";

const app = document.getElementById("app");
if (!app) throw new Error("missing #app container");

const banner = document.createElement("div");
banner.className = "banner hidden";
const controls = document.createElement("div");
controls.className = "controls";
const seriesPanel = document.createElement("section");
seriesPanel.className = "panel panel-series";
const mapPanel = document.createElement("section");
mapPanel.className = "panel panel-map";
const shiftPanel = document.createElement("section");
shiftPanel.className = "panel panel-shift";
const row = document.createElement("div");
row.className = "row";
row.append(mapPanel, shiftPanel);
app.append(banner, controls, seriesPanel, row);

let state: ViewState = decodeState(location.hash);
let windows: WindowInfo[] = [];
let series: SeriesExport | null = null;
let clusterWindow: ClusterWindow | null = null;
let sequence = 0;

function showBanner(message: string | null): void {
  if (message === null) {
    banner.classList.add("hidden");
  } else {
    banner.classList.remove("hidden");
    banner.textContent = message;
  }
}

function setState(patch: Partial<ViewState>): void {
  state = { ...state, ...patch };
  if (state.cluster === null && state.shiftTarget === "cluster") {
    state.shiftTarget = "window";
  }
  history.replaceState(null, "", `#${encodeState(state)}`);
  void refresh();
}

function renderControls(): void {
  controls.replaceChildren();
  const modeLabel = document.createElement("span");
  modeLabel.textContent = "mode:";
  controls.appendChild(modeLabel);
  for (const mode of MODES) {
    const button = document.createElement("button");
    button.textContent = mode;
    button.className = mode === state.mode ? "mode active" : "mode";
    button.addEventListener("click", () => setState({ mode: mode as Mode }));
    controls.appendChild(button);
  }
  const windowSelect = document.createElement("select");
  const placeholder = document.createElement("option");
  placeholder.textContent = "select window";
  placeholder.value = "";
  windowSelect.appendChild(placeholder);
  for (const info of windows) {
    const option = document.createElement("option");
    option.value = info.start;
    option.textContent = `${info.start} (${info.tweet_count} tweets, ${info.cluster_count} clusters)`;
    option.selected = info.start === state.window;
    windowSelect.appendChild(option);
  }
  windowSelect.addEventListener("change", () => {
    setState({ window: windowSelect.value || null, cluster: null, viewport: null });
  });
  controls.appendChild(windowSelect);
}

function renderAll(): void {
  renderControls();
  renderSeries(
    seriesPanel,
    series,
    windows,
    state.seriesModes,
    state.window,
    (start) => setState({ window: start, cluster: null, viewport: null }),
  );
  renderMap(mapPanel, clusterWindow, state, (id) =>
    setState({ cluster: id, shiftTarget: id === null ? "window" : "cluster" }),
  );
}

async function refresh(): Promise<void> {
  const ticket = ++sequence;
  renderAll();
  try {
    if (state.window) {
      const fetched = await fetchClusters(state.window);
      if (ticket !== sequence) return; // stale response: a newer view won
      clusterWindow = fetched;
    } else {
      clusterWindow = null;
    }
    let shift = null;
    if (state.window) {
      try {
        shift = await fetchShift(state.window, state.mode);
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
          shift = null; // nothing exported for this window/mode
        } else {
          throw err;
        }
      }
    }
    if (ticket !== sequence) return;
    showBanner(null);
    renderAll();
    renderShift(shiftPanel, shift);
  } catch (err) {
    if (ticket !== sequence) return;
    showBanner(
      err instanceof ApiError
        ? `service problem: ${err.message}`
        : `unexpected error: ${String(err)}`,
    );
  }
}

async function boot(): Promise<void> {
  renderAll();
  try {
    [windows, series] = await Promise.all([fetchWindows(), fetchSeries()]);
    showBanner(null);
  } catch (err) {
    showBanner(
      err instanceof ApiError
        ? `service unreachable or stale: ${err.message}`
        : `unexpected error: ${String(err)}`,
    );
    return;
  }
  // The URL's window must exist in the listing; otherwise fall back.
  if (state.window && !windows.some((w) => w.start === state.window)) {
    state = { ...state, window: null, cluster: null };
  }
  if (!state.window && windows.length > 0) {
    const busiest = windows.reduce((a, b) =>
      b.cluster_count > a.cluster_count ? b : a,
    );
    state = { ...state, window: busiest.start };
  }
  history.replaceState(null, "", `#${encodeState(state)}`);
  await refresh();
}

window.addEventListener("hashchange", () => {
  state = decodeState(location.hash);
  void refresh();
});

void boot();
