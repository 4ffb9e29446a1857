/**
 * View-model layer: API items map 1:1 onto pin/segment descriptors.
 *
 * The UI performs no analysis of its own — every descriptor corresponds
 * to exactly one item in a server response, and these pure functions are
 * where tests pin that down.
 */

import type { CameraHit, Observation, StopSegment, TrackPoint } from "./types.js";

export interface Pin {
  id: string;
  lat: number;
  lon: number;
  color: string;
  label: string;
  popup: string;
}

export const CAMERA_COLORS: Record<string, string> = {
  public: "#1565c0",
  private: "#6a1b9a",
  unknown: "#546e7a",
};

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** One pin per camera hit; the popup carries the full stored record. */
export function cameraPins(hits: CameraHit[]): Pin[] {
  return hits.map((hit) => ({
    id: hit.camera.camera_id,
    lat: hit.camera.lat,
    lon: hit.camera.lon,
    color: CAMERA_COLORS[hit.camera.category] ?? CAMERA_COLORS["unknown"]!,
    label: `${hit.camera.camera_id} (${Math.round(hit.distance_m)} m)`,
    popup:
      `<b>${esc(hit.camera.camera_id)}</b><br>` +
      `category: ${esc(hit.camera.category)}<br>` +
      `owner: ${esc(hit.camera.owner_contact)}<br>` +
      `${esc(hit.camera.description)}<br>` +
      `distance: ${hit.distance_m.toFixed(1)} m`,
  }));
}

/** One pin per BSSID search hit, labelled with its observation time. */
export function searchPins(observations: Observation[]): Pin[] {
  return observations.map((obs, i) => ({
    id: `${obs.scan_id}:${obs.bssid}:${i}`,
    lat: obs.lat,
    lon: obs.lon,
    color: "#00695c",
    label: `${obs.bssid} @ ${obs.timestamp}`,
    popup:
      `<b>${esc(obs.bssid)}</b><br>` +
      `ssid: ${esc(obs.ssid ?? "(hidden)")}<br>` +
      `seen: ${esc(obs.timestamp)}<br>` +
      `scan: ${esc(obs.scan_id)}` +
      (obs.signal_dbm !== null ? `<br>signal: ${obs.signal_dbm} dBm` : ""),
  }));
}

/** Dwell label for a stop marker, e.g. "600 s". */
export function dwellLabel(stop: StopSegment): string {
  return `${Math.round(stop.dwell_s)} s`;
}

export function stopPins(stops: StopSegment[]): Pin[] {
  return stops.map((stop, i) => ({
    id: `stop:${i}`,
    lat: stop.centroid_lat,
    lon: stop.centroid_lon,
    color: "#e65100",
    label: dwellLabel(stop),
    popup:
      `<b>stop ${i + 1}</b><br>` +
      `dwell: ${dwellLabel(stop)}<br>` +
      `from ${esc(stop.start)}<br>to ${esc(stop.end)}`,
  }));
}

export function trackLine(points: TrackPoint[]): [number, number][] {
  return points.map((p) => [p.lat, p.lon]);
}
