/** Wire types mirroring the service's JSON responses. */

export interface TileManifest {
  name: string;
  attribution: string;
  min_zoom: number;
  max_zoom: number;
  bounds: { south: number; west: number; north: number; east: number };
  tile_format: string;
  tile_count: number;
}

export interface CaseInfo {
  case_id: string;
  name: string;
  created_at: string;
  layer_ids: string[];
}

export interface LayerInfo {
  layer_id: string;
  label: string;
  feature_count: number;
}

export interface Camera {
  camera_id: string;
  lat: number;
  lon: number;
  category: string;
  owner_contact: string;
  description: string;
  source: string;
  tags: string[];
}

export interface CameraHit {
  camera: Camera;
  distance_m: number;
}

export interface ScanInfo {
  scan_id: string;
  label: string;
  captured_from: string | null;
  captured_to: string | null;
  observation_count: number;
}

export interface Observation {
  scan_id: string;
  bssid: string;
  ssid: string | null;
  lat: number;
  lon: number;
  timestamp: string;
  signal_dbm: number | null;
}

export interface ScanDetail {
  scan_id: string;
  label: string;
  captured_from: string | null;
  captured_to: string | null;
  observations: Observation[];
}

export interface ScanDiff {
  added: string[];
  removed: string[];
  renamed: Record<string, { old_ssid: string | null; new_ssid: string | null }>;
  unchanged: string[];
}

export interface TrackInfo {
  track_id: string;
  label: string;
  point_count: number;
  start: string | null;
  end: string | null;
}

export interface TrackPoint {
  lat: number;
  lon: number;
  timestamp: string;
}

export interface Track {
  track_id: string;
  label: string;
  points: TrackPoint[];
}

export interface StopSegment {
  centroid_lat: number;
  centroid_lon: number;
  start: string;
  end: string;
  dwell_s: number;
  first_index: number;
  last_index: number;
}

export interface ImportResult {
  format: string;
  layer_id?: string | null;
  feature_count?: number | null;
  scan_id?: string | null;
  observation_count?: number | null;
  track_ids?: string[] | null;
  detection_count?: number | null;
  camera_count?: number | null;
  skipped_rows?: { row: number; reason: string }[] | null;
}

export interface GeoJsonFeatureCollection {
  type: "FeatureCollection";
  features: {
    type: "Feature";
    geometry:
      | { type: "Point"; coordinates: [number, number] }
      | { type: "LineString"; coordinates: [number, number][] };
    properties: Record<string, string>;
  }[];
}
