import { afterEach, describe, expect, it, vi } from "vitest";

import { api, assertSameOrigin, LatestWins } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("same-origin guard", () => {
  it("accepts relative paths", () => {
    expect(assertSameOrigin("/cameras?case=c")).toBe("/cameras?case=c");
  });

  it("rejects absolute and protocol-relative URLs", () => {
    expect(() => assertSameOrigin("https://example.com/tiles/0/0/0.png")).toThrow();
    expect(() => assertSameOrigin("//example.com/x")).toThrow();
    expect(() => assertSameOrigin("cameras")).toThrow();
  });
});

describe("client requests", () => {
  it("every endpoint call stays on the service origin", async () => {
    const seen: string[] = [];
    vi.stubGlobal("fetch", (input: RequestInfo | URL) => {
      seen.push(String(input));
      return Promise.resolve(jsonResponse([]));
    });

    await api.listCases();
    await api.queryCameras("case-1", 52.08, 4.325, 500, ["private"]);
    await api.searchBssid("case-1", "AA:BB:CC");
    await api.listScans("case-1");
    await api.listTracks("case-1");

    expect(seen.length).toBe(5);
    for (const url of seen) {
      expect(url.startsWith("/")).toBe(true);
      expect(url.startsWith("//")).toBe(false);
    }
    expect(seen[1]).toContain("exclude=private");
    expect(seen[1]).toContain("radius_m=500");
  });

  it("error bodies become typed ApiError", async () => {
    vi.stubGlobal("fetch", () =>
      Promise.resolve(jsonResponse({ code: "unknown_case", message: "no case 'x'" }, 404)),
    );
    await expect(api.listLayers("x")).rejects.toMatchObject({
      code: "unknown_case",
      status: 404,
    });
  });
});

describe("stale response discard", () => {
  it("a slow earlier response never overwrites a newer one", async () => {
    const applied: number[] = [];
    const latest = new LatestWins<number>((v) => applied.push(v));

    let releaseFirst!: (v: number) => void;
    const first = new Promise<number>((resolve) => (releaseFirst = resolve));

    const p1 = latest.issue(() => first);
    const p2 = latest.issue(() => Promise.resolve(2));
    await p2;
    releaseFirst(1); // the old in-flight response arrives late
    await p1;

    expect(applied).toEqual([2]);
  });
});
