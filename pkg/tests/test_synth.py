from __future__ import annotations

import json

import pytest

from forgis.analysis import correlate_bt_anpr, detect_stops
from forgis.errors import InvalidParameters
from forgis.ingest import parse_anpr_csv, parse_bt_csv, parse_camera_csv, parse_gpx, parse_wifi_csv
from forgis.records import GpsTrack
from forgis.spatial import GeoPoint, haversine_distance
from forgis.synth import PlantedPair, StopSpec, SyntheticSpec, TrackProfile, generate, write_dataset


def full_spec(seed: int = 1) -> SyntheticSpec:
    return SyntheticSpec(
        seed=seed,
        n_cameras=25,
        n_scan_networks=15,
        n_noise_vehicles=50,
        track_profile=TrackProfile(
            start=(52.05, 4.30),
            end=(52.11, 4.36),
            stops=[StopSpec(52.08, 4.325, 400.0), StopSpec(52.09, 4.34, 600.0)],
        ),
        planted_pair=PlantedPair(mac="0A:1B:2C:3D:4E:5F", plate="AB123C"),
    )


class TestDeterminism:
    def test_same_seed_identical_bytes(self, tmp_path):
        write_dataset(generate(full_spec(7)), tmp_path / "a")
        write_dataset(generate(full_spec(7)), tmp_path / "b")
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name

    def test_different_seed_differs(self, tmp_path):
        write_dataset(generate(full_spec(7)), tmp_path / "a")
        write_dataset(generate(full_spec(8)), tmp_path / "c")
        assert (tmp_path / "a" / "cameras.csv").read_bytes() != (tmp_path / "c" / "cameras.csv").read_bytes()


class TestGroundTruth:
    def test_sidecar_names_planted_pair(self, tmp_path):
        write_dataset(generate(full_spec()), tmp_path / "ds")
        truth = json.loads((tmp_path / "ds" / "ground_truth.json").read_text())
        assert truth["planted_pair"]["mac"] == "0A:1B:2C:3D:4E:5F"
        assert truth["planted_pair"]["plate"] == "AB123C"
        assert truth["planted_pair"]["n_sensors"] == 5

    def test_sidecar_lists_stops(self, tmp_path):
        spec = SyntheticSpec(
            seed=3,
            track_profile=TrackProfile(
                start=(52.05, 4.30), end=(52.11, 4.36), stops=[StopSpec(52.08, 4.325, 400.0)]
            ),
        )
        write_dataset(generate(spec), tmp_path / "ds")
        truth = json.loads((tmp_path / "ds" / "ground_truth.json").read_text())
        assert len(truth["stops"]) == 1
        assert truth["stops"][0]["dwell_s"] == 400.0

    def test_emitted_files_parse_with_system_parsers(self, tmp_path):
        write_dataset(generate(full_spec()), tmp_path / "ds")
        root = tmp_path / "ds"
        cameras, _ = parse_camera_csv((root / "cameras.csv").read_bytes())
        assert len(cameras) == 25
        scan, _ = parse_wifi_csv((root / "wifi.csv").read_bytes())
        assert len(scan.observations) == 15
        bt, _ = parse_bt_csv((root / "bt.csv").read_bytes())
        anpr, _ = parse_anpr_csv((root / "anpr.csv").read_bytes())
        assert bt and anpr
        fs = parse_gpx((root / "track.gpx").read_bytes())
        assert len(fs.features) == 1


class TestTrackGeneration:
    def test_true_stops_recoverable_by_detector(self):
        ds = generate(full_spec(11))
        track = GpsTrack(track_id="t", points=ds.track_points)
        detected = detect_stops(track, epsilon_m=50.0, tau_s=300.0)
        assert len(detected) == len(ds.true_stops) == 2
        for found, truth in zip(detected, ds.true_stops):
            assert abs(found.dwell_s - truth["dwell_s"]) <= 5.0
            assert haversine_distance(found.centroid, GeoPoint(truth["lat"], truth["lon"])) < 25.0

    def test_no_profile_no_track(self):
        ds = generate(SyntheticSpec(seed=1, n_cameras=2))
        assert ds.track_points == [] and ds.true_stops == []


class TestCorrelationGeneration:
    def test_planted_pair_ranks_first(self):
        spec = SyntheticSpec(
            seed=5,
            n_noise_vehicles=200,
            planted_pair=PlantedPair(mac="0A:1B:2C:3D:4E:5F", plate="AB123C"),
        )
        ds = generate(spec)
        scores = correlate_bt_anpr(ds.bt, ds.anpr, 60.0, 250.0)
        assert scores[0].mac.text == "0A:1B:2C:3D:4E:5F"
        assert scores[0].plate == "AB123C"

    def test_detectability_thins_bt_detections(self):
        # with bt_p = 0.42 and 3 passes over 5 sensors, planted bt detections
        # land well under the 15 opportunities
        spec = SyntheticSpec(seed=9, planted_pair=PlantedPair(mac="0A:00:00:00:00:01", plate="XX999X"))
        ds = generate(spec)
        planted_bt = [d for d in ds.bt if d.mac.text == "0A:00:00:00:00:01"]
        assert 0 < len(planted_bt) < 15
        planted_anpr = [d for d in ds.anpr if d.plate == "XX999X"]
        assert len(planted_anpr) == 15  # anpr_p = 1.0


class TestSpecParsing:
    def test_from_json_round_trip(self):
        raw = {
            "seed": 4,
            "n_cameras": 3,
            "planted_pair": {"mac": "aa-bb-cc-dd-ee-ff", "plate": "ab 12 cd"},
            "track_profile": {"start": [52.0, 4.0], "end": [52.1, 4.1], "stops": [
                {"lat": 52.05, "lon": 4.05, "dwell_s": 360}
            ]},
        }
        spec = SyntheticSpec.from_json(raw)
        assert spec.planted_pair.mac == "AA:BB:CC:DD:EE:FF"
        assert spec.planted_pair.plate == "AB12CD"
        assert spec.track_profile.stops[0].dwell_s == 360

    def test_bad_spec_rejected(self):
        with pytest.raises(InvalidParameters):
            SyntheticSpec.from_json({"n_cameras": 3})
        with pytest.raises(InvalidParameters):
            SyntheticSpec.from_json({"seed": 1, "planted_pair": {"mac": "zz", "plate": "A"}})
