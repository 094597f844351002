// Typed client for the read-only service. Schema versions are checked on
// arrival; a mismatch is surfaced like any other fetch failure so the
// banner logic treats stale artifacts and dead servers the same way.

import {
  ClusterWindow,
  CountiesExport,
  SeriesExport,
  ShiftExport,
  WindowInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
  }
}

async function getJson<T>(url: string, expectSchema?: string): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url);
  } catch (err) {
    throw new ApiError(`service unreachable: ${String(err)}`);
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const message =
      body && body.error ? body.error.message : `HTTP ${response.status}`;
    throw new ApiError(message, response.status);
  }
  if (expectSchema && body && body.schema !== expectSchema) {
    throw new ApiError(
      `schema mismatch: expected ${expectSchema}, got ${body.schema}`,
    );
  }
  return body as T;
}

export function fetchWindows(base = ""): Promise<WindowInfo[]> {
  return getJson(`${base}/v1/windows`);
}

export function fetchClusters(windowStart: string, base = ""): Promise<ClusterWindow> {
  return getJson(`${base}/v1/clusters?window=${encodeURIComponent(windowStart)}`);
}

export function fetchSeries(base = ""): Promise<SeriesExport> {
  return getJson(`${base}/v1/series`, "actionscope.series/v1");
}

export function fetchShift(
  windowStart: string,
  mode: string,
  base = "",
): Promise<ShiftExport> {
  return getJson(
    `${base}/v1/shift?window=${encodeURIComponent(windowStart)}&mode=${encodeURIComponent(mode)}`,
  );
}

export function fetchCounties(base = ""): Promise<CountiesExport> {
  return getJson(`${base}/v1/counties`, "actionscope.counties/v1");
}
