/**
 * Typed client for the service API.
 *
 * Every request is issued against a relative path, so nothing can leave
 * the service origin — the server is the only network the client knows.
 * Responses racing each other (map scrubbing, rapid re-queries) are
 * settled by sequence number: a stale response never overwrites a newer
 * one.
 */

import type {
  Camera,
  CameraHit,
  CaseInfo,
  GeoJsonFeatureCollection,
  ImportResult,
  LayerInfo,
  Observation,
  ScanDetail,
  ScanDiff,
  ScanInfo,
  StopSegment,
  TileManifest,
  Track,
  TrackInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly code: string, message: string, readonly status: number) {
    super(message);
  }
}

/** Reject anything that is not a same-origin relative path. */
export function assertSameOrigin(path: string): string {
  if (!path.startsWith("/") || path.startsWith("//")) {
    throw new Error(`refusing non-origin request target: ${path}`);
  }
  return path;
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(assertSameOrigin(path), init);
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(body.code ?? "error", body.message ?? response.statusText, response.status);
  }
  return body as T;
}

function query(params: Record<string, string | number | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) search.set(key, String(value));
  }
  return search.toString();
}

export const api = {
  tileManifest: () => request<TileManifest>("/tiles/manifest.json"),
  health: () => request<{ status: string; tile_count: number; case_count: number }>("/health"),

  listCases: () => request<CaseInfo[]>("/cases"),
  createCase: (name: string) =>
    request<CaseInfo>("/cases", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ name }),
    }),

  importFile: (caseId: string, format: string, label: string, data: ArrayBuffer, lenient: boolean) =>
    request<ImportResult>(
      `/cases/${encodeURIComponent(caseId)}/import?` +
        query({ format, label, lenient: lenient ? "true" : undefined }),
      { method: "POST", headers: { "content-type": "application/octet-stream" }, body: data },
    ),

  listLayers: (caseId: string) => request<LayerInfo[]>(`/cases/${encodeURIComponent(caseId)}/layers`),
  layerGeoJson: (caseId: string, layerId: string) =>
    request<GeoJsonFeatureCollection>(
      `/cases/${encodeURIComponent(caseId)}/layers/${encodeURIComponent(layerId)}.geojson`,
    ),

  queryCameras: (caseId: string, lat: number, lon: number, radiusM: number, exclude: string[]) =>
    request<CameraHit[]>(
      "/cameras?" +
        query({ case: caseId, lat, lon, radius_m: radiusM, exclude: exclude.join(",") }),
    ),
  getCamera: (caseId: string, cameraId: string) =>
    request<Camera>(`/cameras/${encodeURIComponent(cameraId)}?` + query({ case: caseId })),

  listScans: (caseId: string) => request<ScanInfo[]>(`/cases/${encodeURIComponent(caseId)}/scans`),
  scanDetail: (caseId: string, scanId: string) =>
    request<ScanDetail>(
      `/cases/${encodeURIComponent(caseId)}/scans/${encodeURIComponent(scanId)}`,
    ),
  scanDiff: (caseId: string, scanA: string, scanB: string) =>
    request<ScanDiff>("/analysis/scan-diff", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ case: caseId, scan_a: scanA, scan_b: scanB }),
    }),

  searchBssid: (caseId: string, queryText: string) =>
    request<Observation[]>(
      `/analysis/bssid/${encodeURIComponent(queryText)}?` + query({ case: caseId }),
    ),

  listTracks: (caseId: string) => request<TrackInfo[]>(`/cases/${encodeURIComponent(caseId)}/tracks`),
  trackSlice: (caseId: string, trackId: string, from?: string, to?: string) =>
    request<Track>(
      `/tracks/${encodeURIComponent(trackId)}?` + query({ case: caseId, from, to }),
    ),
  stops: (caseId: string, trackId: string, epsilonM = 50, tauS = 300) =>
    request<StopSegment[]>("/analysis/stops", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ case: caseId, track_id: trackId, epsilon_m: epsilonM, tau_s: tauS }),
    }),
};

export type Api = typeof api;

/**
 * Latest-wins coordinator: issue() tags each call with a sequence number
 * and the consumer only ever sees the most recently issued call's result.
 */
export class LatestWins<T> {
  private seq = 0;

  constructor(private readonly onResult: (value: T) => void) {}

  async issue(work: () => Promise<T>): Promise<void> {
    const ticket = ++this.seq;
    const value = await work();
    if (ticket === this.seq) {
      this.onResult(value);
    }
  }
}
