"""forgis: an air-gapped forensic GIS workbench.

Offline slippy-map tile serving, multi-format geodata ingestion,
case-scoped evidence storage, and investigative spatial analysis, exposed
over an intranet HTTP API.
"""

__version__ = "0.1.0"
