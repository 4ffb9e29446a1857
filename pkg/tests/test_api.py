from __future__ import annotations

import json

from forgis.ingest import parse_geojson
from conftest import FIXTURES


def import_file(client, case_id, name, fmt, label="", lenient=False, data=None):
    params = {"format": fmt}
    if label:
        params["label"] = label
    if lenient:
        params["lenient"] = "true"
    return client.post(
        f"/cases/{case_id}/import",
        params=params,
        content=data if data is not None else (FIXTURES / name).read_bytes(),
        headers={"content-type": "application/octet-stream"},
    )


STATIONARY_GPX = (
    '<?xml version="1.0"?><gpx xmlns="http://www.topografix.com/GPX/1/1"><trk><trkseg>'
    + "".join(
        f'<trkpt lat="52.0800" lon="4.3250"><time>2016-05-01T12:{m:02d}:00Z</time></trkpt>'
        for m in range(0, 11)
    )
    + "</trkseg></trk></gpx>"
).encode()


class TestHealth:
    def test_fresh_server(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert body["tile_count"] == 3
        assert body["case_count"] == 0

    def test_case_count_updates(self, client, case_id):
        assert client.get("/health").json()["case_count"] == 1

    def test_unknown_route_is_404_with_error_body(self, client):
        response = client.get("/definitely/not/a/route")
        assert response.status_code == 404
        body = response.json()
        assert set(body) == {"code", "message"}


class TestTiles:
    def test_manifest_exposed(self, client):
        body = client.get("/tiles/manifest.json").json()
        assert body["min_zoom"] == 0 and body["max_zoom"] == 2
        assert body["attribution"] == "test data"
        assert body["tile_count"] == 3
        assert body["bounds"]["west"] == -180.0

    def test_fixture_tile_byte_identical(self, client, archive_dir):
        response = client.get("/tiles/1/1/1.png")
        assert response.status_code == 200
        assert response.headers["content-type"] == "image/png"
        assert response.content == (archive_dir / "1" / "1" / "1.png").read_bytes()

    def test_absent_tile_404(self, client):
        response = client.get("/tiles/2/0/0.png")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"

    def test_zoom_out_of_range_400(self, client):
        response = client.get("/tiles/99/0/0.png")
        assert response.status_code == 400
        assert response.json()["code"] == "zoom_out_of_range"

    def test_non_integer_coordinates_400(self, client):
        assert client.get("/tiles/1/x/1.png").status_code == 400

    def test_off_grid_tile_404(self, client):
        assert client.get("/tiles/1/5/0.png").status_code == 404


class TestCases:
    def test_create_and_list(self, client):
        created = client.post("/cases", json={"name": "mugging station square"})
        assert created.status_code == 201
        body = created.json()
        assert body["name"] == "mugging station square"
        listed = client.get("/cases").json()
        assert [c["case_id"] for c in listed] == [body["case_id"]]

    def test_unknown_case_404(self, client):
        response = client.get("/cases/case-missing")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_case"


class TestImport:
    def test_golden_gpx(self, client, case_id):
        response = import_file(client, case_id, "golden.gpx", "gpx", label="trace")
        assert response.status_code == 201
        body = response.json()
        assert body["feature_count"] == 2
        assert body["layer_id"] == "layer-0001"
        assert len(body["track_ids"]) == 1

    def test_format_mismatch_is_400(self, client, case_id):
        response = import_file(client, case_id, "golden.kml", "gpx")
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "malformed_document"

    def test_unknown_format_rejected(self, client, case_id):
        response = import_file(client, case_id, "golden.gpx", "shapefile")
        assert response.status_code == 400

    def test_layer_round_trips_through_geojson(self, client, case_id):
        created = import_file(client, case_id, "golden.kml", "kml").json()
        response = client.get(f"/cases/{case_id}/layers/{created['layer_id']}.geojson")
        assert response.status_code == 200
        fs = parse_geojson(response.content)
        assert len(fs.features) == 2

    def test_wifi_import_creates_scan(self, client, case_id):
        body = import_file(client, case_id, "scan_a.csv", "wifi", label="sweep").json()
        assert body["observation_count"] == 3
        scans = client.get(f"/cases/{case_id}/scans").json()
        assert [s["scan_id"] for s in scans] == [body["scan_id"]]
        assert scans[0]["label"] == "sweep"

    def test_scan_detail_carries_observations(self, client, case_id):
        scan_id = import_file(client, case_id, "scan_a.csv", "wifi").json()["scan_id"]
        body = client.get(f"/cases/{case_id}/scans/{scan_id}").json()
        assert len(body["observations"]) == 3
        assert body["observations"][0]["bssid"] == "AA:BB:CC:DD:EE:01"
        assert body["observations"][0]["lat"] == 52.08
        assert client.get(f"/cases/{case_id}/scans/scan-none").status_code == 404

    def test_duplicate_scan_import_conflicts(self, client, case_id):
        assert import_file(client, case_id, "scan_a.csv", "wifi").status_code == 201
        response = import_file(client, case_id, "scan_a.csv", "wifi")
        assert response.status_code == 409
        assert response.json()["code"] == "duplicate_id"

    def test_camera_import(self, client, case_id):
        body = import_file(client, case_id, "cameras.csv", "camera").json()
        assert body["camera_count"] == 3

    def test_bad_rows_abort_in_strict_mode(self, client, case_id):
        data = (
            b"timestamp,plate,sensor_id,lat,lon\n"
            b"2016-05-01T12:00:00Z,AB12CD,s1,52.0,4.0\n"
            b"2016-05-01T12:00:01Z,,s1,52.0,4.0\n"
        )
        response = import_file(client, case_id, "", "anpr", data=data)
        assert response.status_code == 400
        assert "row 3" in response.json()["message"]

    def test_lenient_skips_and_reports(self, client, case_id):
        data = (
            b"timestamp,plate,sensor_id,lat,lon\n"
            b"2016-05-01T12:00:00Z,AB12CD,s1,52.0,4.0\n"
            b"2016-05-01T12:00:01Z,,s1,52.0,4.0\n"
        )
        body = import_file(client, case_id, "", "anpr", lenient=True, data=data).json()
        assert body["detection_count"] == 1
        assert body["skipped_rows"] == [{"row": 3, "reason": "missing plate"}]

    def test_empty_body_rejected(self, client, case_id):
        response = import_file(client, case_id, "", "gpx", data=b"")
        assert response.status_code == 400


class TestCameras:
    def seed(self, client, case_id):
        assert import_file(client, case_id, "cameras.csv", "camera").status_code == 201

    def test_radius_zero_at_camera_position(self, client, case_id):
        self.seed(client, case_id)
        response = client.get(
            "/cameras",
            params={"case": case_id, "lat": 52.0800, "lon": 4.3250, "radius_m": 0},
        )
        hits = response.json()
        assert [h["camera"]["camera_id"] for h in hits] == ["cam-001"]
        assert hits[0]["distance_m"] == 0.0

    def test_exclude_private(self, client, case_id):
        self.seed(client, case_id)
        hits = client.get(
            "/cameras",
            params={"case": case_id, "lat": 52.08, "lon": 4.325, "radius_m": 100000, "exclude": "private"},
        ).json()
        assert all(h["camera"]["category"] != "private" for h in hits)
        assert len(hits) == 2

    def test_sorted_by_distance(self, client, case_id):
        self.seed(client, case_id)
        hits = client.get(
            "/cameras", params={"case": case_id, "lat": 52.08, "lon": 4.325, "radius_m": 100000}
        ).json()
        distances = [h["distance_m"] for h in hits]
        assert distances == sorted(distances)
        assert len(hits) == 3

    def test_camera_popup_record(self, client, case_id):
        self.seed(client, case_id)
        body = client.get("/cameras/cam-002", params={"case": case_id}).json()
        assert body["owner_contact"] == "bakker b.v."
        assert body["category"] == "private"

    def test_unknown_camera_404(self, client, case_id):
        assert client.get("/cameras/cam-999", params={"case": case_id}).status_code == 404

    def test_malformed_coordinates_400(self, client, case_id):
        response = client.get(
            "/cameras", params={"case": case_id, "lat": "north", "lon": 4.0, "radius_m": 10}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_parameters"

    def test_out_of_range_latitude_400(self, client, case_id):
        response = client.get(
            "/cameras", params={"case": case_id, "lat": 95.0, "lon": 4.0, "radius_m": 10}
        )
        assert response.status_code == 400


class TestAnalysisEndpoints:
    def test_scan_diff_with_self_all_unchanged(self, client, case_id):
        scan_id = import_file(client, case_id, "scan_a.csv", "wifi").json()["scan_id"]
        diff = client.post(
            "/analysis/scan-diff", json={"case": case_id, "scan_a": scan_id, "scan_b": scan_id}
        ).json()
        assert diff["added"] == [] and diff["removed"] == [] and diff["renamed"] == {}
        assert len(diff["unchanged"]) == 3

    def test_scan_diff_fixture(self, client, case_id):
        a = import_file(client, case_id, "scan_a.csv", "wifi").json()["scan_id"]
        b = import_file(client, case_id, "scan_b.csv", "wifi").json()["scan_id"]
        diff = client.post("/analysis/scan-diff", json={"case": case_id, "scan_a": a, "scan_b": b}).json()
        assert diff["added"] == ["AA:BB:CC:DD:EE:04"]
        assert diff["removed"] == ["AA:BB:CC:DD:EE:02"]
        assert diff["unchanged"] == ["AA:BB:CC:DD:EE:01"]
        assert diff["renamed"] == {
            "AA:BB:CC:DD:EE:03": {"old_ssid": None, "new_ssid": "NowVisible"}
        }

    def test_unknown_scan_404(self, client, case_id):
        response = client.post(
            "/analysis/scan-diff", json={"case": case_id, "scan_a": "scan-x", "scan_b": "scan-y"}
        )
        assert response.status_code == 404

    def test_bssid_search(self, client, case_id):
        import_file(client, case_id, "scan_a.csv", "wifi")
        hits = client.get("/analysis/bssid/aa-bb-cc-dd-ee-01", params={"case": case_id}).json()
        assert len(hits) == 1
        assert hits[0]["bssid"] == "AA:BB:CC:DD:EE:01"
        prefix_hits = client.get("/analysis/bssid/AA:BB:CC", params={"case": case_id}).json()
        assert len(prefix_hits) == 3

    def test_bssid_malformed_query_400(self, client, case_id):
        response = client.get("/analysis/bssid/zz", params={"case": case_id})
        assert response.status_code == 400
        assert response.json()["code"] == "malformed_query"

    def test_presence(self, client, case_id):
        import_file(client, case_id, "scan_a.csv", "wifi")
        rows = client.post(
            "/analysis/presence",
            json={"case": case_id, "bssids": ["aa:bb:cc:dd:ee:01", "00:00:00:00:00:99"]},
        ).json()
        assert len(rows) == 1
        assert rows[0]["scan_id"].startswith("scan-")

    def test_correlate_empty_store(self, client, case_id):
        body = client.post("/analysis/correlate", json={"case": case_id, "dt_s": 60, "d_m": 100}).json()
        assert body == []

    def test_correlate_negative_window_400(self, client, case_id):
        response = client.post("/analysis/correlate", json={"case": case_id, "dt_s": -5, "d_m": 100})
        assert response.status_code == 400

    def test_stops_on_stationary_track(self, client, case_id):
        body = import_file(client, case_id, "", "gpx", data=STATIONARY_GPX).json()
        track_id = body["track_ids"][0]
        stops = client.post(
            "/analysis/stops",
            json={"case": case_id, "track_id": track_id, "epsilon_m": 50, "tau_s": 300},
        ).json()
        assert len(stops) == 1
        assert stops[0]["dwell_s"] == 600.0

    def test_track_slice(self, client, case_id):
        body = import_file(client, case_id, "", "gpx", data=STATIONARY_GPX).json()
        track_id = body["track_ids"][0]
        full = client.get(f"/tracks/{track_id}", params={"case": case_id}).json()
        assert len(full["points"]) == 11
        sliced = client.get(
            f"/tracks/{track_id}",
            params={"case": case_id, "from": "2016-05-01T12:03:00Z", "to": "2016-05-01T12:05:00Z"},
        ).json()
        assert len(sliced["points"]) == 3
        empty = client.get(
            f"/tracks/{track_id}",
            params={"case": case_id, "from": "2016-05-01T00:00:00Z", "to": "2016-05-01T00:10:00Z"},
        ).json()
        assert empty["points"] == []

    def test_track_bad_range_400(self, client, case_id):
        body = import_file(client, case_id, "", "gpx", data=STATIONARY_GPX).json()
        track_id = body["track_ids"][0]
        response = client.get(
            f"/tracks/{track_id}",
            params={"case": case_id, "from": "2016-05-02T00:00:00Z", "to": "2016-05-01T00:00:00Z"},
        )
        assert response.status_code == 400


class TestByteStability:
    def test_repeated_gets_identical(self, client, case_id):
        import_file(client, case_id, "cameras.csv", "camera")
        import_file(client, case_id, "scan_a.csv", "wifi")
        import_file(client, case_id, "golden.gpx", "gpx")
        urls = [
            ("/cameras", {"case": case_id, "lat": 52.08, "lon": 4.325, "radius_m": 5000}),
            (f"/cases/{case_id}/layers", None),
            (f"/cases/{case_id}/scans", None),
            ("/health", None),
            (f"/cases/{case_id}/layers/layer-0001.geojson", None),
        ]
        for url, params in urls:
            first = client.get(url, params=params).content
            second = client.get(url, params=params).content
            assert first == second, url


class TestErrorShape:
    def test_every_error_carries_code_and_message(self, client, case_id):
        failures = [
            client.get("/tiles/99/0/0.png"),
            client.get("/tiles/2/0/0.png"),
            client.get("/cases/case-none"),
            client.get("/cameras", params={"case": case_id, "lat": "x", "lon": 1, "radius_m": 1}),
            client.post("/analysis/scan-diff", json={"case": case_id, "scan_a": "a", "scan_b": "b"}),
            client.get("/analysis/bssid/zz", params={"case": case_id}),
            import_file(client, case_id, "golden.kml", "gpx"),
            client.get("/nope"),
        ]
        for response in failures:
            assert response.status_code >= 400
            body = response.json()
            assert set(body) == {"code", "message"}, response.url
            # no filesystem paths leak
            assert "/root" not in body["message"] and "/tmp" not in body["message"]
