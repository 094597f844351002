"""Canonical export encoding plus the reproducibility envelope.

Every export is deterministic JSON (sorted keys, compact separators) and
embeds the producing config and the SHA-256 digests of its inputs, so a
rerun with identical inputs yields byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

SERIES_SCHEMA = "actionscope.series/v1"
CLUSTERS_SCHEMA = "actionscope.clusters/v1"
SHIFTS_SCHEMA = "actionscope.shifts/v1"
COUNTIES_SCHEMA = "actionscope.counties/v1"
EVAL_SCHEMA = "actionscope.eval/v1"


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def input_ref(path) -> dict:
    """Reference an input by basename + content digest (path-independent)."""
    path = Path(path)
    return {"name": path.name, "sha256": sha256_file(path)}


def canonical_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_export(path, payload) -> None:
    Path(path).write_text(canonical_dumps(payload) + "\n", encoding="utf-8")


def load_export(path, schema: str) -> dict:
    """Read an export and reject schema-version mismatches."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    found = payload.get("schema") if isinstance(payload, dict) else None
    if found != schema:
        raise ValueError(f"expected schema {schema!r} in {path}, found {found!r}")
    return payload


def envelope(schema: str, config: dict, inputs: dict) -> dict:
    return {"schema": schema, "config": config, "inputs": inputs}
