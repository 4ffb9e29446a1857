"""Exception hierarchy shared across the workbench.

Every error carries a stable ``code`` string so the HTTP layer can render
``{code, message}`` bodies without leaking internals.
"""

from __future__ import annotations


class ForgisError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


# --- coordinates / projection ---------------------------------------------

class InvalidCoordinate(ForgisError):
    code = "invalid_coordinate"


class LatitudeOutOfProjection(ForgisError):
    code = "latitude_out_of_projection"


# --- document / row ingestion ---------------------------------------------

class MalformedDocument(ForgisError):
    code = "malformed_document"


class UnsupportedCrs(ForgisError):
    code = "unsupported_crs"


class MissingHeader(ForgisError):
    code = "missing_header"


class BadRows(ForgisError):
    """One or more CSV rows were rejected; ``rows`` lists (row_number, reason)."""

    code = "bad_rows"

    def __init__(self, rows: list[tuple[int, str]]):
        self.rows = list(rows)
        listing = "; ".join(f"row {n}: {why}" for n, why in self.rows)
        super().__init__(f"{len(self.rows)} bad row(s): {listing}")


# --- store -----------------------------------------------------------------

class UnknownCase(ForgisError):
    code = "unknown_case"


class UnknownLayer(ForgisError):
    code = "unknown_layer"


class UnknownCamera(ForgisError):
    code = "unknown_camera"


class UnknownScan(ForgisError):
    code = "unknown_scan"


class UnknownTrack(ForgisError):
    code = "unknown_track"


class DuplicateId(ForgisError):
    code = "duplicate_id"


class CorruptStore(ForgisError):
    code = "corrupt_store"


# --- analysis --------------------------------------------------------------

class MalformedQuery(ForgisError):
    code = "malformed_query"


class InvalidParameters(ForgisError):
    code = "invalid_parameters"


# --- tile archive ----------------------------------------------------------

class MissingManifest(ForgisError):
    code = "missing_manifest"


class CorruptManifest(ForgisError):
    code = "corrupt_manifest"


class ZoomOutOfRange(ForgisError):
    code = "zoom_out_of_range"


class TileNotFound(ForgisError):
    code = "not_found"


# --- configuration ---------------------------------------------------------

class ConfigError(ForgisError):
    code = "config_error"
