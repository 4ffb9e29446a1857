/**
 * Layer visibility state. Layer data is fetched once and cached;
 * toggling visibility only shows or hides what is already loaded.
 */

import type { GeoJsonFeatureCollection } from "./types.js";

export type LayerKind = "features" | "cameras" | "scan" | "scan-diff" | "track";

export interface UiLayerState {
  layerId: string;
  label: string;
  visible: boolean;
  kind: LayerKind;
  data: GeoJsonFeatureCollection | null;
}

export class LayerStore {
  private layers = new Map<string, UiLayerState>();
  fetchCount = 0;

  register(layerId: string, label: string, kind: LayerKind = "features"): UiLayerState {
    const existing = this.layers.get(layerId);
    if (existing) return existing;
    const state: UiLayerState = { layerId, label, visible: false, kind, data: null };
    this.layers.set(layerId, state);
    return state;
  }

  list(): UiLayerState[] {
    return [...this.layers.values()];
  }

  /** Show a layer, fetching its data only on first use. */
  async show(
    layerId: string,
    fetcher: (layerId: string) => Promise<GeoJsonFeatureCollection>,
  ): Promise<UiLayerState> {
    const layer = this.layers.get(layerId);
    if (!layer) throw new Error(`unknown layer ${layerId}`);
    if (layer.data === null) {
      this.fetchCount += 1;
      layer.data = await fetcher(layerId);
    }
    layer.visible = true;
    return layer;
  }

  hide(layerId: string): UiLayerState {
    const layer = this.layers.get(layerId);
    if (!layer) throw new Error(`unknown layer ${layerId}`);
    layer.visible = false;
    return layer;
  }
}
