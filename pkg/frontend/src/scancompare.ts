/**
 * Scan-comparison rendering: the server's diff partitions BSSIDs into
 * four classes, each drawn in its own fixed color. Positions come from
 * the scans' own observations (newest sighting of each BSSID): classes
 * present in scan B use B's position, vanished networks use scan A's.
 */

import type { Observation, ScanDetail, ScanDiff } from "./types.js";
import type { Pin } from "./pins.js";

export type DiffClass = "added" | "removed" | "renamed" | "unchanged";

export const DIFF_COLORS: Record<DiffClass, string> = {
  added: "#2e7d32",
  removed: "#c62828",
  renamed: "#f9a825",
  unchanged: "#1565c0",
};

export const DIFF_LEGEND: { cls: DiffClass; color: string; title: string }[] = [
  { cls: "added", color: DIFF_COLORS.added, title: "new network" },
  { cls: "removed", color: DIFF_COLORS.removed, title: "network gone" },
  { cls: "renamed", color: DIFF_COLORS.renamed, title: "name changed" },
  { cls: "unchanged", color: DIFF_COLORS.unchanged, title: "unchanged" },
];

export function classOf(diff: ScanDiff, bssid: string): DiffClass | null {
  if (diff.added.includes(bssid)) return "added";
  if (diff.removed.includes(bssid)) return "removed";
  if (bssid in diff.renamed) return "renamed";
  if (diff.unchanged.includes(bssid)) return "unchanged";
  return null;
}

function newestPositions(scan: ScanDetail): Map<string, Observation> {
  const newest = new Map<string, Observation>();
  for (const obs of scan.observations) {
    const seen = newest.get(obs.bssid);
    if (!seen || obs.timestamp >= seen.timestamp) {
      newest.set(obs.bssid, obs);
    }
  }
  return newest;
}

/** One pin per BSSID in the diff, colored by its class. */
export function diffPins(diff: ScanDiff, scanA: ScanDetail, scanB: ScanDetail): Pin[] {
  const fromA = newestPositions(scanA);
  const fromB = newestPositions(scanB);
  const pins: Pin[] = [];

  const push = (bssid: string, cls: DiffClass, obs: Observation | undefined, detail: string) => {
    if (!obs) return;
    pins.push({
      id: `diff:${bssid}`,
      lat: obs.lat,
      lon: obs.lon,
      color: DIFF_COLORS[cls],
      label: `${bssid} (${cls})`,
      popup: `<b>${bssid}</b><br>${cls}${detail}`,
    });
  };

  for (const bssid of diff.added) {
    push(bssid, "added", fromB.get(bssid), `<br>ssid: ${fromB.get(bssid)?.ssid ?? "(hidden)"}`);
  }
  for (const bssid of diff.removed) {
    push(bssid, "removed", fromA.get(bssid), `<br>ssid: ${fromA.get(bssid)?.ssid ?? "(hidden)"}`);
  }
  for (const [bssid, names] of Object.entries(diff.renamed)) {
    push(
      bssid,
      "renamed",
      fromB.get(bssid),
      `<br>${names.old_ssid ?? "(hidden)"} &rarr; ${names.new_ssid ?? "(hidden)"}`,
    );
  }
  for (const bssid of diff.unchanged) {
    push(bssid, "unchanged", fromB.get(bssid), "");
  }
  return pins;
}
