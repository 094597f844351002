#!/usr/bin/env python3
"""Generate the deterministic test fixture under tests/data/.

Produces a coded training corpus, an unlabeled stream with planted
spatial pockets, two event windows, and a small county grid. Output is
stable for a given seed; regenerate only when the fixture design changes.
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

BASE = datetime(2014, 8, 11, 0, 0, 0, tzinfo=timezone.utc)
DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

RIVERSIDE = (38.7500, -90.2700)
HARBOR = (22.2800, 114.1600)

MARKERS = {
    "collective_force": [
        "crowd pushing barricades",
        "smoke grenades fired",
        "line of shields",
        "street blockade now",
        "windows smashed",
    ],
    "collective_peace": [
        "candle vigil tonight",
        "song circle",
        "food drive tables",
        "hands joined",
    ],
    "singular_force": [
        "thrown bottle",
        "lone vandal",
        "slashed tires",
    ],
    "singular_peace": [
        "open letter posted",
        "kind words",
        "quiet appeal",
    ],
}

BACKGROUND = [
    "morning coffee",
    "traffic slow today",
    "nice weather",
    "game tonight",
    "lunch downtown",
    "new playlist",
    "bus running late",
    "sunset photos",
    "weekend plans",
    "homework done",
]


def jitter(rng, center, spread_deg):
    lat, lon = center
    return (
        round(lat + rng.uniform(-spread_deg, spread_deg), 6),
        round(lon + rng.uniform(-spread_deg, spread_deg), 6),
    )


def compose_text(rng, labels):
    parts = []
    for label in sorted(labels):
        parts.extend(rng.sample(MARKERS[label], 2))
    parts.extend(rng.sample(BACKGROUND, 2 if labels else 4))
    rng.shuffle(parts)
    return " ".join(parts)


def iso(ts):
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def write_ndjson(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")


def make_labeled(rng, n=800):
    records = []
    modes = list(MARKERS)
    for i in range(n):
        labels = sorted(m for m in modes if rng.random() < 0.16)
        site = RIVERSIDE if rng.random() < 0.7 else HARBOR
        lat, lon = jitter(rng, site, 0.02)
        ts = BASE + timedelta(seconds=rng.randrange(0, 48 * 3600))
        records.append(
            {
                "id": f"coded{i:04d}",
                "ts": iso(ts),
                "lat": lat,
                "lon": lon,
                "text": compose_text(rng, labels),
                "labels": labels,
            }
        )
    return records


def make_stream(rng, n=500):
    """Unlabeled stream with three dense pockets plus scattered chatter."""
    pockets = [
        # (center offset from riverside, hour, mode flavor, count)
        ((0.0015, -0.0010), 4, "collective_force", 90),
        ((-0.0120, 0.0140), 5, "collective_peace", 70),
        ((0.0008, 0.0006), 6, "collective_force", 60),
    ]
    records = []
    counter = 0

    def emit(lat, lon, ts, labels):
        nonlocal counter
        records.append(
            {
                "id": f"live{counter:04d}",
                "ts": iso(ts),
                "lat": round(lat, 6),
                "lon": round(lon, 6),
                "text": compose_text(rng, labels),
            }
        )
        counter += 1

    for (dlat, dlon), hour, flavor, count in pockets:
        center = (RIVERSIDE[0] + dlat, RIVERSIDE[1] + dlon)
        for _ in range(count):
            lat, lon = jitter(rng, center, 0.0009)  # ~100 m pocket
            ts = BASE + timedelta(hours=hour, seconds=rng.randrange(0, 3600))
            labels = {flavor} if rng.random() < 0.72 else set()
            emit(lat, lon, ts, labels)
    while counter < n:
        site = RIVERSIDE if rng.random() < 0.8 else HARBOR
        lat, lon = jitter(rng, site, 0.03)
        ts = BASE + timedelta(seconds=rng.randrange(0, 12 * 3600))
        labels = {rng.choice(list(MARKERS))} if rng.random() < 0.2 else set()
        emit(lat, lon, ts, labels)
    records.sort(key=lambda r: (r["ts"], r["id"]))
    return records


def make_windows():
    return [
        {
            "label": "riverside-march",
            "lat": RIVERSIDE[0],
            "lon": RIVERSIDE[1],
            "radius_m": 6000.0,
            "start": iso(BASE),
            "end": iso(BASE + timedelta(hours=12)),
        },
        {
            "label": "harbor-assembly",
            "lat": HARBOR[0],
            "lon": HARBOR[1],
            "radius_m": 8000.0,
            "start": iso(BASE),
            "end": iso(BASE + timedelta(hours=48)),
        },
    ]


def square(lon0, lat0, size):
    return [
        [lon0, lat0],
        [lon0 + size, lat0],
        [lon0 + size, lat0 + size],
        [lon0, lat0 + size],
        [lon0, lat0],
    ]


def make_counties():
    features = []
    cells = [(-90.5, 38.5), (-90.0, 38.5), (-90.5, 39.0), (-90.0, 39.0)]
    for i, (lon0, lat0) in enumerate(cells):
        rings = [square(lon0, lat0, 0.5)]
        if i == 0:
            # Hole in the first county, away from the riverside pockets.
            rings.append(list(reversed(square(lon0 + 0.35, lat0 + 0.35, 0.1))))
        features.append(
            {
                "type": "Feature",
                "properties": {"county_id": f"grid{i}"},
                "geometry": {"type": "Polygon", "coordinates": rings},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def main(seed=20140811):
    rng = random.Random(seed)
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    write_ndjson(DATA_DIR / "fixture_labeled.ndjson", make_labeled(rng))
    write_ndjson(DATA_DIR / "fixture_stream.ndjson", make_stream(rng))
    write_ndjson(DATA_DIR / "fixture_windows.ndjson", make_windows())
    (DATA_DIR / "fixture_counties.geojson").write_text(
        json.dumps(make_counties(), sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"fixture written to {DATA_DIR}")


if __name__ == "__main__":
    main()
