// ViewState <-> URL hash. The whole analyst context (selected window, mode
// lines, map viewport, opened cluster) round-trips through the URL so a
// diagnosis can be shared as a link.

import { Mode, MODES } from "./types.js";

export interface Viewport {
  lat: number;
  lon: number;
  zoom: number; // multiplier over the auto-fit scale
}

export interface ViewState {
  window: string | null; // start instant of the selected window
  mode: Mode; // active mode for the map fractions and the shift panel
  seriesModes: Mode[]; // lines drawn on the time-series panel
  viewport: Viewport | null; // null = auto-fit the selected window
  cluster: number | null; // opened cluster id
  shiftTarget: "window" | "cluster";
}

export const DEFAULT_STATE: ViewState = {
  window: null,
  mode: "collective_force",
  seriesModes: ["collective_force", "collective_peace", "singular_force", "singular_peace"],
  viewport: null,
  cluster: null,
  shiftTarget: "window",
};

function isMode(value: string): value is Mode {
  return (MODES as readonly string[]).includes(value);
}

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.window) params.set("window", state.window);
  params.set("mode", state.mode);
  params.set("series", state.seriesModes.join(","));
  if (state.viewport) {
    const { lat, lon, zoom } = state.viewport;
    params.set("view", `${lat.toFixed(6)},${lon.toFixed(6)},${zoom.toFixed(3)}`);
  }
  if (state.cluster !== null) params.set("cluster", String(state.cluster));
  params.set("target", state.shiftTarget);
  return params.toString();
}

export function decodeState(hash: string): ViewState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const state: ViewState = {
    ...DEFAULT_STATE,
    seriesModes: [...DEFAULT_STATE.seriesModes],
  };
  const window = params.get("window");
  if (window) state.window = window;
  const mode = params.get("mode");
  if (mode && isMode(mode)) state.mode = mode;
  const series = params.get("series");
  if (series !== null) {
    state.seriesModes = series.split(",").filter(isMode);
  }
  const view = params.get("view");
  if (view) {
    const parts = view.split(",").map(Number);
    if (parts.length === 3 && parts.every((v) => Number.isFinite(v))) {
      state.viewport = { lat: parts[0], lon: parts[1], zoom: parts[2] };
    }
  }
  const cluster = params.get("cluster");
  if (cluster !== null && /^\d+$/.test(cluster)) state.cluster = Number(cluster);
  const target = params.get("target");
  if (target === "window" || target === "cluster") state.shiftTarget = target;
  if (state.cluster === null && state.shiftTarget === "cluster") {
    state.shiftTarget = "window"; // shift target must reference something shown
  }
  return state;
}
