/**
 * Leaflet wiring: one tile layer pointed at this origin's /tiles archive,
 * plus overlay groups the tools draw into. Vector markers only, so the
 * map never requests an image beyond the tile PNGs.
 */

import type * as Leaflet from "leaflet";

import type { TileManifest } from "./types.js";
import type { Pin } from "./pins.js";

// Leaflet ships as a UMD script served from this origin; the browser
// provides the global, these imports carry only its types.
declare const L: typeof Leaflet;

export interface MapHandles {
  map: Leaflet.Map;
  groups: {
    layers: Leaflet.LayerGroup;
    cameras: Leaflet.LayerGroup;
    scanDiff: Leaflet.LayerGroup;
    search: Leaflet.LayerGroup;
    track: Leaflet.LayerGroup;
  };
  radiusCircle: Leaflet.Circle | null;
}

export const TILE_URL_TEMPLATE = "/tiles/{z}/{x}/{y}.png";

export function createMap(container: string | HTMLElement, manifest: TileManifest): MapHandles {
  const bounds = L.latLngBounds(
    [manifest.bounds.south, manifest.bounds.west],
    [manifest.bounds.north, manifest.bounds.east],
  );
  const map = L.map(container, {
    minZoom: manifest.min_zoom,
    maxZoom: manifest.max_zoom, // leaflet clamps zoom attempts past the archive
    maxBounds: bounds.pad(0.25),
  });
  map.fitBounds(bounds);
  L.tileLayer(TILE_URL_TEMPLATE, {
    minZoom: manifest.min_zoom,
    maxZoom: manifest.max_zoom,
    attribution: manifest.attribution,
    bounds,
  }).addTo(map);

  const groups = {
    layers: L.layerGroup().addTo(map),
    cameras: L.layerGroup().addTo(map),
    scanDiff: L.layerGroup().addTo(map),
    search: L.layerGroup().addTo(map),
    track: L.layerGroup().addTo(map),
  };
  return { map, groups, radiusCircle: null };
}

export function drawPins(group: Leaflet.LayerGroup, pins: Pin[]): void {
  group.clearLayers();
  for (const pin of pins) {
    L.circleMarker([pin.lat, pin.lon], {
      radius: 7,
      color: pin.color,
      fillColor: pin.color,
      fillOpacity: 0.85,
      weight: 2,
    })
      .bindTooltip(pin.label)
      .bindPopup(pin.popup)
      .addTo(group);
  }
}

export function drawRadius(handles: MapHandles, lat: number, lon: number, radiusM: number): void {
  if (handles.radiusCircle) {
    handles.radiusCircle.remove();
  }
  handles.radiusCircle = L.circle([lat, lon], {
    radius: radiusM,
    color: "#c62828",
    fillColor: "#c62828",
    fillOpacity: 0.08,
    weight: 2,
  }).addTo(handles.map);
}

export function drawTrack(group: Leaflet.LayerGroup, line: [number, number][], stopPins: Pin[]): void {
  group.clearLayers();
  if (line.length >= 2) {
    L.polyline(line, { color: "#37474f", weight: 3 }).addTo(group);
  }
  for (const pin of stopPins) {
    L.circleMarker([pin.lat, pin.lon], {
      radius: 9,
      color: pin.color,
      fillColor: pin.color,
      fillOpacity: 0.9,
    })
      .bindTooltip(pin.label, { permanent: true, direction: "top" })
      .bindPopup(pin.popup)
      .addTo(group);
  }
}

/** Render stored GeoJSON layers (points and lines) into a group. */
export function drawGeoJsonLayers(
  group: Leaflet.LayerGroup,
  collections: { type: string; features: unknown[] }[],
): void {
  group.clearLayers();
  for (const collection of collections) {
    L.geoJSON(collection as GeoJSON.GeoJsonObject, {
      pointToLayer: (_feature, latlng) =>
        L.circleMarker(latlng, { radius: 5, color: "#00838f", fillOpacity: 0.8 }),
      style: { color: "#00838f", weight: 3 },
      onEachFeature: (feature, layer) => {
        const props = (feature.properties ?? {}) as Record<string, string>;
        const rows = Object.entries(props)
          .map(([k, v]) => `${k}: ${v}`)
          .join("<br>");
        if (rows) layer.bindPopup(rows);
      },
    }).addTo(group);
  }
}
