"""Request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    code: str
    message: str


class HealthOut(BaseModel):
    status: str
    tile_count: int
    case_count: int
    version: str


class CreateCaseIn(BaseModel):
    name: str


class CaseOut(BaseModel):
    case_id: str
    name: str
    created_at: str
    layer_ids: list[str]


class LayerInfoOut(BaseModel):
    layer_id: str
    label: str
    feature_count: int


class ImportResultOut(BaseModel):
    """What an import produced; fields are None when the format does not
    yield that entity kind."""

    format: str
    layer_id: str | None = None
    feature_count: int | None = None
    scan_id: str | None = None
    observation_count: int | None = None
    track_ids: list[str] | None = None
    detection_count: int | None = None
    camera_count: int | None = None
    skipped_rows: list[SkippedRow] | None = None


class SkippedRow(BaseModel):
    row: int
    reason: str


class CameraOut(BaseModel):
    camera_id: str
    lat: float
    lon: float
    category: str
    owner_contact: str
    description: str
    source: str
    tags: list[str]


class CameraHitOut(BaseModel):
    camera: CameraOut
    distance_m: float


class ScanInfoOut(BaseModel):
    scan_id: str
    label: str
    captured_from: str | None
    captured_to: str | None
    observation_count: int


class TrackInfoOut(BaseModel):
    track_id: str
    label: str
    point_count: int
    start: str | None
    end: str | None


class ScanDiffIn(BaseModel):
    case: str
    scan_a: str
    scan_b: str


class RenamedEntry(BaseModel):
    old_ssid: str | None
    new_ssid: str | None


class ScanDiffOut(BaseModel):
    added: list[str]
    removed: list[str]
    renamed: dict[str, RenamedEntry]
    unchanged: list[str]


class ObservationOut(BaseModel):
    scan_id: str
    bssid: str
    ssid: str | None
    lat: float
    lon: float
    timestamp: str
    signal_dbm: int | None


class PresenceIn(BaseModel):
    case: str
    bssids: list[str]


class PresenceOut(BaseModel):
    bssid: str
    lat: float
    lon: float
    timestamp: str
    scan_id: str
    ssid: str | None


class CorrelateIn(BaseModel):
    case: str
    dt_s: float = Field(ge=0)
    d_m: float = Field(ge=0)


class AssociationOut(BaseModel):
    mac: str
    plate: str
    co_occurrences: int
    distinct_sensors: int
    score: float


class StopsIn(BaseModel):
    case: str
    track_id: str
    epsilon_m: float = 50.0
    tau_s: float = 300.0


class StopOut(BaseModel):
    centroid_lat: float
    centroid_lon: float
    start: str
    end: str
    dwell_s: float
    first_index: int
    last_index: int


class TrackPointOut(BaseModel):
    lat: float
    lon: float
    timestamp: str


class TrackOut(BaseModel):
    track_id: str
    label: str
    points: list[TrackPointOut]


class ScanDetailOut(BaseModel):
    scan_id: str
    label: str
    captured_from: str | None
    captured_to: str | None
    observations: list[ObservationOut]


ImportResultOut.model_rebuild()
