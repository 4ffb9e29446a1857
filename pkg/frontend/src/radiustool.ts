/**
 * Crime-scene radius tool state: a map click sets the center, the radius
 * comes from the operator in meters, and categories can be hidden.
 */

export interface RadiusToolState {
  center: { lat: number; lon: number } | null;
  radiusM: number;
  excluded: Set<string>;
}

export function initialRadiusState(): RadiusToolState {
  return { center: null, radiusM: 250, excluded: new Set() };
}

export function setCenter(state: RadiusToolState, lat: number, lon: number): RadiusToolState {
  return { ...state, center: { lat, lon } };
}

export function setRadius(state: RadiusToolState, radiusM: number): RadiusToolState {
  if (!Number.isFinite(radiusM) || radiusM < 0) {
    throw new Error("radius must be a non-negative number of meters");
  }
  return { ...state, radiusM };
}

export function toggleExcluded(state: RadiusToolState, category: string): RadiusToolState {
  const excluded = new Set(state.excluded);
  if (excluded.has(category)) {
    excluded.delete(category);
  } else {
    excluded.add(category);
  }
  return { ...state, excluded };
}

/** True when the tool has everything it needs to query the service. */
export function readyToQuery(state: RadiusToolState): state is RadiusToolState & {
  center: { lat: number; lon: number };
} {
  return state.center !== null && state.radiusM >= 0;
}
