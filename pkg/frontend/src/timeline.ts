/**
 * Track timeline scrubber: a [from, to] range over the track's time span
 * drives the server-side slice; stop markers are shown only while their
 * dwell interval overlaps the selected range.
 */

import type { StopSegment, TrackInfo } from "./types.js";

export interface TimelineRange {
  fromMs: number;
  toMs: number;
}

export function fullRange(track: TrackInfo): TimelineRange | null {
  if (!track.start || !track.end) return null;
  return { fromMs: Date.parse(track.start), toMs: Date.parse(track.end) };
}

/** Slider positions are percentages of the track's span. */
export function rangeFromPercent(full: TimelineRange, fromPct: number, toPct: number): TimelineRange {
  const span = full.toMs - full.fromMs;
  const lo = Math.min(fromPct, toPct);
  const hi = Math.max(fromPct, toPct);
  return {
    fromMs: full.fromMs + (span * lo) / 100,
    toMs: full.fromMs + (span * hi) / 100,
  };
}

export function toIso(ms: number): string {
  return new Date(ms).toISOString().replace(/\.\d{3}Z$/, "Z");
}

/** Stops whose dwell interval intersects the selected range. */
export function visibleStops(stops: StopSegment[], range: TimelineRange): StopSegment[] {
  return stops.filter((stop) => {
    const start = Date.parse(stop.start);
    const end = Date.parse(stop.end);
    return end >= range.fromMs && start <= range.toMs;
  });
}
