/**
 * Application wiring: DOM events on one side, the typed API client on the
 * other, with the view-model modules in between. All investigative
 * computation happens server-side; this file only moves data onto the map.
 */

import type { LeafletMouseEvent } from "leaflet";

import { api, ApiError, LatestWins } from "./api.js";
import { validateQuery } from "./bssidsearch.js";
import { LayerStore } from "./layers.js";
import { createMap, drawGeoJsonLayers, drawPins, drawRadius, drawTrack, MapHandles } from "./map.js";
import { cameraPins, searchPins, stopPins, trackLine } from "./pins.js";
import { initialRadiusState, readyToQuery, setCenter, setRadius, toggleExcluded } from "./radiustool.js";
import { diffPins } from "./scancompare.js";
import { DIFF_LEGEND } from "./scancompare.js";
import { fullRange, rangeFromPercent, toIso, visibleStops } from "./timeline.js";
import type { StopSegment, Track, TrackInfo } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const status = (text: string) => {
  el<HTMLSpanElement>("status").textContent = text;
};

async function boot(): Promise<void> {
  const manifest = await api.tileManifest();
  const handles = createMap("map", manifest);
  status(`${manifest.name} — ${manifest.tile_count} tiles`);

  const caseSelect = el<HTMLSelectElement>("case-select");
  let caseId = "";

  async function refreshCases(selected?: string): Promise<void> {
    const cases = await api.listCases();
    caseSelect.innerHTML = "";
    for (const record of cases) {
      const option = document.createElement("option");
      option.value = record.case_id;
      option.textContent = `${record.name} (${record.case_id})`;
      caseSelect.appendChild(option);
    }
    if (cases.length) {
      caseId = selected ?? cases[cases.length - 1]!.case_id;
      caseSelect.value = caseId;
      await onCaseChanged(handles);
    }
  }

  caseSelect.addEventListener("change", () => {
    caseId = caseSelect.value;
    void onCaseChanged(handles);
  });

  el<HTMLButtonElement>("new-case-btn").addEventListener("click", () => {
    const name = el<HTMLInputElement>("new-case-name").value.trim();
    if (!name) return;
    void api.createCase(name).then((record) => refreshCases(record.case_id));
  });

  // --- import ----------------------------------------------------------

  el<HTMLButtonElement>("import-btn").addEventListener("click", () => {
    void (async () => {
      const fileInput = el<HTMLInputElement>("import-file");
      const file = fileInput.files?.[0];
      const out = el<HTMLDivElement>("import-result");
      if (!caseId || !file) {
        out.textContent = "pick a case and a file first";
        return;
      }
      const format = el<HTMLSelectElement>("import-format").value;
      const lenient = el<HTMLInputElement>("import-lenient").checked;
      try {
        const result = await api.importFile(caseId, format, file.name, await file.arrayBuffer(), lenient);
        const parts = Object.entries(result)
          .filter(([, v]) => v !== null && v !== undefined && !(Array.isArray(v) && v.length === 0))
          .map(([k, v]) => `${k}: ${Array.isArray(v) ? v.length : v}`);
        out.textContent = parts.join(", ");
        await onCaseChanged(handles);
      } catch (err) {
        out.textContent = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      }
    })();
  });

  // --- stored layers -----------------------------------------------------

  const layerStore = new LayerStore();

  async function refreshLayerList(): Promise<void> {
    const list = el<HTMLUListElement>("layer-list");
    list.innerHTML = "";
    if (!caseId) return;
    for (const info of await api.listLayers(caseId)) {
      layerStore.register(info.layer_id, info.label);
      const item = document.createElement("li");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = layerStore.list().find((l) => l.layerId === info.layer_id)?.visible ?? false;
      box.addEventListener("change", () => {
        void (async () => {
          if (box.checked) {
            await layerStore.show(info.layer_id, (id) => api.layerGeoJson(caseId, id));
          } else {
            layerStore.hide(info.layer_id);
          }
          const visible = layerStore.list().filter((l) => l.visible && l.data);
          drawGeoJsonLayers(handles.groups.layers, visible.map((l) => l.data!));
        })();
      });
      const label = document.createElement("label");
      label.append(box, ` ${info.label || info.layer_id} (${info.feature_count})`);
      item.appendChild(label);
      list.appendChild(item);
    }
  }

  // --- radius tool -------------------------------------------------------

  let radiusState = initialRadiusState();
  const cameraResults = new LatestWins<Awaited<ReturnType<typeof api.queryCameras>>>((hits) => {
    drawPins(handles.groups.cameras, cameraPins(hits));
    el<HTMLDivElement>("radius-result").textContent = `${hits.length} camera(s) in radius`;
  });

  async function runRadiusQuery(): Promise<void> {
    if (!caseId || !readyToQuery(radiusState)) return;
    const { center, radiusM, excluded } = radiusState;
    drawRadius(handles, center.lat, center.lon, radiusM);
    await cameraResults.issue(() =>
      api.queryCameras(caseId, center.lat, center.lon, radiusM, [...excluded].sort()),
    );
  }

  handles.map.on("click", (event: LeafletMouseEvent) => {
    radiusState = setCenter(radiusState, event.latlng.lat, event.latlng.lng);
    void runRadiusQuery();
  });

  el<HTMLInputElement>("radius-input").addEventListener("change", (event) => {
    const value = Number((event.target as HTMLInputElement).value);
    try {
      radiusState = setRadius(radiusState, value);
    } catch {
      return;
    }
    void runRadiusQuery();
  });

  for (const box of document.querySelectorAll<HTMLInputElement>(".exclude-cat")) {
    box.addEventListener("change", () => {
      radiusState = toggleExcluded(radiusState, box.value);
      void runRadiusQuery();
    });
  }

  // --- scan comparison ----------------------------------------------------

  const legend = el<HTMLUListElement>("diff-legend");
  legend.innerHTML = "";
  for (const entry of DIFF_LEGEND) {
    const item = document.createElement("li");
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = entry.color;
    item.append(swatch, entry.title);
    legend.appendChild(item);
  }

  async function refreshScanSelectors(): Promise<void> {
    const scans = caseId ? await api.listScans(caseId) : [];
    for (const id of ["scan-a", "scan-b"]) {
      const select = el<HTMLSelectElement>(id);
      select.innerHTML = "";
      for (const scan of scans) {
        const option = document.createElement("option");
        option.value = scan.scan_id;
        option.textContent = `${scan.label || scan.scan_id} (${scan.observation_count})`;
        select.appendChild(option);
      }
    }
  }

  el<HTMLButtonElement>("diff-btn").addEventListener("click", () => {
    void (async () => {
      const scanA = el<HTMLSelectElement>("scan-a").value;
      const scanB = el<HTMLSelectElement>("scan-b").value;
      const out = el<HTMLDivElement>("diff-result");
      if (!caseId || !scanA || !scanB) {
        out.textContent = "import two scans first";
        return;
      }
      const [diff, detailA, detailB] = await Promise.all([
        api.scanDiff(caseId, scanA, scanB),
        api.scanDetail(caseId, scanA),
        api.scanDetail(caseId, scanB),
      ]);
      drawPins(handles.groups.scanDiff, diffPins(diff, detailA, detailB));
      out.textContent =
        `new: ${diff.added.length}, gone: ${diff.removed.length}, ` +
        `renamed: ${Object.keys(diff.renamed).length}, unchanged: ${diff.unchanged.length}`;
    })();
  });

  // --- BSSID search ---------------------------------------------------------

  el<HTMLButtonElement>("bssid-btn").addEventListener("click", () => {
    void (async () => {
      const errorBox = el<HTMLDivElement>("bssid-error");
      const out = el<HTMLDivElement>("bssid-result");
      const check = validateQuery(el<HTMLInputElement>("bssid-input").value);
      if (!check.ok) {
        errorBox.textContent = check.error; // no request leaves the page
        return;
      }
      errorBox.textContent = "";
      const hits = await api.searchBssid(caseId, check.canonical);
      drawPins(handles.groups.search, searchPins(hits));
      out.textContent = `${hits.length} observation(s)`;
    })();
  });

  // --- track timeline --------------------------------------------------------

  let tracks: TrackInfo[] = [];
  let currentStops: StopSegment[] = [];
  const trackResults = new LatestWins<{ track: Track; stops: StopSegment[] }>(({ track, stops }) => {
    drawTrack(handles.groups.track, trackLine(track.points), stopPins(stops));
    el<HTMLDivElement>("track-result").textContent =
      `${track.points.length} point(s), ${stops.length} stop(s) in range`;
  });

  async function refreshTrackSelector(): Promise<void> {
    tracks = caseId ? await api.listTracks(caseId) : [];
    const select = el<HTMLSelectElement>("track-select");
    select.innerHTML = "";
    for (const track of tracks) {
      const option = document.createElement("option");
      option.value = track.track_id;
      option.textContent = `${track.label || track.track_id} (${track.point_count})`;
      select.appendChild(option);
    }
    currentStops = [];
  }

  async function runTrackSlice(): Promise<void> {
    const trackId = el<HTMLSelectElement>("track-select").value;
    const info = tracks.find((t) => t.track_id === trackId);
    if (!caseId || !info) return;
    const span = fullRange(info);
    if (!span) return;
    if (!currentStops.length) {
      currentStops = await api.stops(caseId, trackId);
    }
    const fromPct = Number(el<HTMLInputElement>("range-from").value);
    const toPct = Number(el<HTMLInputElement>("range-to").value);
    const range = rangeFromPercent(span, fromPct, toPct);
    await trackResults.issue(async () => ({
      track: await api.trackSlice(caseId, trackId, toIso(range.fromMs), toIso(range.toMs)),
      stops: visibleStops(currentStops, range),
    }));
  }

  el<HTMLSelectElement>("track-select").addEventListener("change", () => {
    currentStops = [];
    void runTrackSlice();
  });
  el<HTMLInputElement>("range-from").addEventListener("input", () => void runTrackSlice());
  el<HTMLInputElement>("range-to").addEventListener("input", () => void runTrackSlice());

  async function onCaseChanged(_handles: MapHandles): Promise<void> {
    await Promise.all([refreshLayerList(), refreshScanSelectors(), refreshTrackSelector()]);
  }

  await refreshCases();
}

void boot().catch((err) => status(`startup failed: ${err}`));
