import { describe, expect, it, vi } from "vitest";

import { LayerStore } from "../src/layers.js";
import type { GeoJsonFeatureCollection } from "../src/types.js";

const COLLECTION: GeoJsonFeatureCollection = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      geometry: { type: "Point", coordinates: [4.325, 52.08] },
      properties: { name: "pin" },
    },
  ],
};

describe("layer visibility", () => {
  it("toggling visibility never refetches unchanged data", async () => {
    const store = new LayerStore();
    store.register("layer-0001", "golden");
    const fetcher = vi.fn().mockResolvedValue(COLLECTION);

    await store.show("layer-0001", fetcher);
    store.hide("layer-0001");
    await store.show("layer-0001", fetcher);
    store.hide("layer-0001");
    await store.show("layer-0001", fetcher);

    expect(fetcher).toHaveBeenCalledTimes(1);
    expect(store.fetchCount).toBe(1);
  });

  it("re-registering keeps existing state", async () => {
    const store = new LayerStore();
    store.register("layer-0001", "golden");
    await store.show("layer-0001", vi.fn().mockResolvedValue(COLLECTION));
    const again = store.register("layer-0001", "golden");
    expect(again.visible).toBe(true);
    expect(again.data).not.toBeNull();
  });

  it("unknown layers fail loudly", () => {
    const store = new LayerStore();
    expect(() => store.hide("layer-9999")).toThrow();
  });
});
