// Pure layout math for the three panels. Everything here is a function of
// export data plus pixel dimensions, so the fidelity contracts (bar length
// proportional to contribution, arc fraction equal to positive fraction,
// monotone circle radii) are testable without a DOM.

import { ClusterInfo, SeriesBin, ShiftEntry } from "./types.js";

export interface Bar {
  phrase: string;
  contribution: number;
  frequency: number;
  x: number; // left edge in px
  width: number; // px, proportional to |contribution|
  y: number;
  height: number;
  positive: boolean;
}

export interface ShiftLayout {
  bars: Bar[]; // exactly in export order, top to bottom
  axisX: number;
  width: number;
  height: number;
}

const BAR_HEIGHT = 16;
const BAR_GAP = 4;

/** Horizontal bar chart: positive contributions extend right of the axis,
 * negative left; lengths scale linearly so the largest |contribution|
 * spans the available half-width. Entry order is preserved verbatim. */
export function shiftBarLayout(entries: ShiftEntry[], width: number): ShiftLayout {
  const axisX = width / 2;
  const halfWidth = width / 2 - 8;
  const maxAbs = entries.reduce((m, e) => Math.max(m, Math.abs(e.contribution)), 0);
  const scale = maxAbs > 0 ? halfWidth / maxAbs : 0;
  const bars = entries.map((entry, index) => {
    const length = Math.abs(entry.contribution) * scale;
    const positive = entry.contribution >= 0;
    return {
      phrase: entry.phrase,
      contribution: entry.contribution,
      frequency: entry.frequency,
      x: positive ? axisX : axisX - length,
      width: length,
      y: index * (BAR_HEIGHT + BAR_GAP),
      height: BAR_HEIGHT,
      positive,
    };
  });
  return {
    bars,
    axisX,
    width,
    height: entries.length * (BAR_HEIGHT + BAR_GAP),
  };
}

export function polarPoint(
  cx: number,
  cy: number,
  r: number,
  angle: number,
): { x: number; y: number } {
  // Angle measured clockwise from 12 o'clock, matching how pie wedges read.
  return { x: cx + r * Math.sin(angle), y: cy - r * Math.cos(angle) };
}

export function arcAngle(fraction: number): number {
  const clamped = Math.min(1, Math.max(0, fraction));
  return clamped * 2 * Math.PI;
}

/** SVG path for a pie wedge covering `fraction` of the circle. Fraction 1
 * renders the full disc (two half arcs, since a single arc of 2*pi
 * collapses); fraction 0 renders nothing. */
export function arcPath(cx: number, cy: number, r: number, fraction: number): string {
  const angle = arcAngle(fraction);
  if (angle <= 0) return "";
  if (angle >= 2 * Math.PI - 1e-9) {
    const top = polarPoint(cx, cy, r, 0);
    const bottom = polarPoint(cx, cy, r, Math.PI);
    return (
      `M ${top.x} ${top.y} ` +
      `A ${r} ${r} 0 1 1 ${bottom.x} ${bottom.y} ` +
      `A ${r} ${r} 0 1 1 ${top.x} ${top.y} Z`
    );
  }
  const start = polarPoint(cx, cy, r, 0);
  const end = polarPoint(cx, cy, r, angle);
  const largeArc = angle > Math.PI ? 1 : 0;
  return (
    `M ${cx} ${cy} L ${start.x} ${start.y} ` +
    `A ${r} ${r} 0 ${largeArc} 1 ${end.x} ${end.y} Z`
  );
}

export interface CircleLayout {
  id: number;
  cx: number;
  cy: number;
  r: number; // px, monotone in radius_m at fixed scale
  fraction: number;
}

export interface MapLayout {
  circles: CircleLayout[];
  metersPerPixel: number;
}

const METERS_PER_DEGREE_LAT = 111_194.9; // mean-radius sphere

/** Equirectangular projection of one window's clusters, auto-fitted to the
 * panel and scaled by `zoom`. Radii are drawn at map scale with a minimum
 * so tiny clusters stay clickable; the mapping stays monotone. */
export function mapLayout(
  clusters: ClusterInfo[],
  mode: string,
  width: number,
  height: number,
  center?: { lat: number; lon: number } | null,
  zoom = 1,
): MapLayout {
  if (clusters.length === 0) {
    return { circles: [], metersPerPixel: 1 };
  }
  const lats = clusters.map((c) => c.centroid.lat);
  const lons = clusters.map((c) => c.centroid.lon);
  const midLat = center ? center.lat : (Math.min(...lats) + Math.max(...lats)) / 2;
  const midLon = center ? center.lon : (Math.min(...lons) + Math.max(...lons)) / 2;
  const cosLat = Math.max(0.05, Math.cos((midLat * Math.PI) / 180));

  // Extent in meters, padded by each cluster's own radius.
  let extent = 1000; // floor: a lone cluster still gets sensible scale
  for (const cluster of clusters) {
    const dy = (cluster.centroid.lat - midLat) * METERS_PER_DEGREE_LAT;
    const dx = (cluster.centroid.lon - midLon) * METERS_PER_DEGREE_LAT * cosLat;
    extent = Math.max(
      extent,
      Math.abs(dx) + cluster.radius_m,
      Math.abs(dy) + cluster.radius_m,
    );
  }
  const metersPerPixel = (2 * extent) / (Math.min(width, height) * 0.9) / zoom;
  const circles = clusters.map((cluster) => {
    const dy = (cluster.centroid.lat - midLat) * METERS_PER_DEGREE_LAT;
    const dx = (cluster.centroid.lon - midLon) * METERS_PER_DEGREE_LAT * cosLat;
    return {
      id: cluster.id,
      cx: width / 2 + dx / metersPerPixel,
      cy: height / 2 - dy / metersPerPixel,
      r: Math.max(4, cluster.radius_m / metersPerPixel),
      fraction: cluster.positive_fraction[mode] ?? 0,
    };
  });
  return { circles, metersPerPixel };
}

export interface SeriesPoint {
  x: number;
  y: number;
  binStart: string;
  value: number;
}

export interface SeriesLayout {
  lines: Map<string, SeriesPoint[]>;
  xOfBin: (index: number) => number;
  binAt: (x: number) => number; // inverse of xOfBin, for click handling
  maxValue: number;
  width: number;
  height: number;
}

/** Per-mode polylines over the hour bins; y is linear in presence with the
 * panel maximum spanning all requested modes. */
export function seriesLayout(
  bins: SeriesBin[],
  modes: string[],
  width: number,
  height: number,
): SeriesLayout {
  const pad = 24;
  const innerW = width - pad * 2;
  const innerH = height - pad * 2;
  const n = bins.length;
  const maxValue = Math.max(
    1e-9,
    ...bins.flatMap((bin) => modes.map((mode) => bin.presence[mode] ?? 0)),
  );
  const xOfBin = (index: number) =>
    pad + (n <= 1 ? innerW / 2 : (index * innerW) / (n - 1));
  const binAt = (x: number) => {
    if (n <= 1) return 0;
    const raw = Math.round(((x - pad) * (n - 1)) / innerW);
    return Math.min(n - 1, Math.max(0, raw));
  };
  const lines = new Map<string, SeriesPoint[]>();
  for (const mode of modes) {
    lines.set(
      mode,
      bins.map((bin, index) => ({
        x: xOfBin(index),
        y: pad + innerH * (1 - (bin.presence[mode] ?? 0) / maxValue),
        binStart: bin.start,
        value: bin.presence[mode] ?? 0,
      })),
    );
  }
  return { lines, xOfBin, binAt, maxValue, width, height };
}
