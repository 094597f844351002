"""Read-only HTTP service over precomputed export artifacts.

The service never recomputes classifier math: it answers GETs from the
series/clusters/shifts/counties exports found in the artifact directory,
and can optionally serve the static browser explorer. Artifacts are
loaded once at startup and treated as immutable, so concurrent readers
need no locking.
"""

from __future__ import annotations

import json
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from . import artifacts

_ARTIFACT_FILES = {
    "series": ("series.json", artifacts.SERIES_SCHEMA),
    "clusters": ("clusters.json", artifacts.CLUSTERS_SCHEMA),
    "shifts": ("shifts.json", artifacts.SHIFTS_SCHEMA),
    "counties": ("counties.json", artifacts.COUNTIES_SCHEMA),
}


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


class ArtifactStore:
    """Loads and indexes the export files present in one directory."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.exports: dict[str, dict] = {}
        for key, (filename, schema) in _ARTIFACT_FILES.items():
            path = self.directory / filename
            if path.exists():
                self.exports[key] = artifacts.load_export(path, schema)

    def _require(self, key: str) -> dict:
        if key not in self.exports:
            raise ApiError(404, f"no {key} artifact in {self.directory}")
        return self.exports[key]

    def windows(self) -> list[dict]:
        clusters = self._require("clusters")
        return [
            {
                "start": window["start"],
                "end": window["end"],
                "tweet_count": window["tweet_count"],
                "cluster_count": len(window["clusters"]),
            }
            for window in clusters["windows"]
        ]

    def clusters_for(self, window_start: str) -> dict:
        clusters = self._require("clusters")
        for window in clusters["windows"]:
            if window["start"] == window_start:
                return window
        raise ApiError(404, f"no cluster window starting at {window_start!r}")

    def series(
        self, span_from: Optional[str], span_to: Optional[str], mode: Optional[str]
    ) -> dict:
        export = self._require("series")
        bins = export["bins"]
        if span_from:
            bins = [b for b in bins if b["start"] >= span_from]
        if span_to:
            bins = [b for b in bins if b["start"] < span_to]
        if mode:
            projected = []
            for entry in bins:
                if mode not in entry["presence"]:
                    raise ApiError(404, f"mode {mode!r} not present in series export")
                projected.append({**entry, "presence": {mode: entry["presence"][mode]}})
            bins = projected
        return {**export, "bins": bins}

    def shift(self, window_start: Optional[str], mode: Optional[str]) -> dict:
        export = self._require("shifts")
        for shift in export["shifts"]:
            window = shift.get("window") or {}
            if window_start and window.get("start") != window_start:
                continue
            if mode and shift["mode"] != mode:
                continue
            return shift
        raise ApiError(
            404, f"no shift for window={window_start!r} mode={mode!r}"
        )

    def counties(self, span_from: Optional[str], span_to: Optional[str]) -> dict:
        export = self._require("counties")
        config = export.get("config", {})
        if span_from and config.get("from") != span_from:
            raise ApiError(404, f"county export covers {config.get('from')!r}, not {span_from!r}")
        if span_to and config.get("to") != span_to:
            raise ApiError(404, f"county export covers {config.get('to')!r}, not {span_to!r}")
        return export


class _Handler(BaseHTTPRequestHandler):
    store: ArtifactStore
    ui_dir: Optional[Path] = None

    def log_message(self, *args) -> None:  # quiet by default
        pass

    def _send_json(self, payload, status: int = 200) -> None:
        body = artifacts.canonical_dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_file(self, path: Path) -> None:
        content_type = mimetypes.guess_type(str(path))[0] or "application/octet-stream"
        body = path.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802 - http.server interface
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            if url.path == "/v1/windows":
                self._send_json(self.store.windows())
            elif url.path == "/v1/clusters":
                self._send_json(self.store.clusters_for(query.get("window", "")))
            elif url.path == "/v1/series":
                self._send_json(
                    self.store.series(
                        query.get("from"), query.get("to"), query.get("mode")
                    )
                )
            elif url.path == "/v1/shift":
                self._send_json(
                    self.store.shift(query.get("window"), query.get("mode"))
                )
            elif url.path == "/v1/counties":
                self._send_json(self.store.counties(query.get("from"), query.get("to")))
            elif self.ui_dir is not None and not url.path.startswith("/v1/"):
                relative = url.path.lstrip("/") or "index.html"
                target = (self.ui_dir / relative).resolve()
                if not str(target).startswith(str(self.ui_dir.resolve())) or not target.is_file():
                    raise ApiError(404, f"no such file: {url.path}")
                self._send_file(target)
            else:
                raise ApiError(404, f"unknown endpoint {url.path}")
        except ApiError as exc:
            self._send_json(
                {"error": {"type": "not-found" if exc.status == 404 else "bad-request",
                           "message": str(exc)}},
                status=exc.status,
            )


def create_server(
    artifact_dir, bind: str = "127.0.0.1:0", ui_dir=None
) -> ThreadingHTTPServer:
    """Build (but do not start) the service; useful for tests."""
    host, _, port = bind.partition(":")
    store = ArtifactStore(artifact_dir)
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"store": store, "ui_dir": Path(ui_dir) if ui_dir else None},
    )
    return ThreadingHTTPServer((host, int(port or 0)), handler)


def run_server(artifact_dir, bind: str, ui_dir=None) -> None:
    server = create_server(artifact_dir, bind, ui_dir)
    host, port = server.server_address[:2]
    print(f"serving artifacts from {artifact_dir} on http://{host}:{port}")
    try:
        server.serve_forever()
    finally:
        server.server_close()
