"""Aggregate diagnostic products: hourly presence series and county stats.

Presence is the sum of posterior probabilities over a UTC hour, one value
per mode. County activity assigns classified tweets to polygon regions
from a GeoJSON-style boundary file and reports the share classified as
any form of political action.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .geo import GeoPoint
from .ingest import ClassifiedTweet, HOUR, floor_hour
from .modes import ActionMode, ALL_MODES

UNASSIGNED_ID = "<unassigned>"

# A ring is a closed sequence of (lon, lat) vertices, first == last, as in
# geographic feature interchange files. A polygon is its outer ring
# followed by hole rings; containment uses the even-odd rule.
Ring = Sequence[tuple[float, float]]
Polygon = Sequence[Ring]


@dataclass(frozen=True, slots=True)
class TimeBin:
    start: datetime  # aligned to the UTC hour
    presence: dict[ActionMode, float]
    tweet_count: int


@dataclass(frozen=True, slots=True)
class CountyStat:
    county_id: str
    tweet_count: int
    political_pct: Optional[float]  # None when tweet_count == 0
    positives: dict[ActionMode, int]


@dataclass(frozen=True, slots=True)
class CountyFeature:
    county_id: str
    polygons: tuple[Polygon, ...]
    bbox: tuple[float, float, float, float]  # min_lon, min_lat, max_lon, max_lat


def hourly_presence(
    tweets: Iterable[ClassifiedTweet],
    modes: Sequence[ActionMode],
    span: tuple[datetime, datetime],
) -> list[TimeBin]:
    """Sum posteriors per mode into hour bins covering ``span``.

    Bins are aligned to the UTC hour (the span start is floored); empty
    hours are emitted with zeros. Tweets are accumulated in (timestamp,
    id) order so the floating sums are reproducible.
    """
    start, end = span
    if end < start:
        raise ValueError("span end precedes start")
    first = floor_hour(start)
    starts = []
    cursor = first
    while cursor < end:
        starts.append(cursor)
        cursor += HOUR
    presence = [{mode: 0.0 for mode in modes} for _ in starts]
    counts = [0] * len(starts)
    for tweet in sorted(tweets, key=lambda t: (t.timestamp, t.id)):
        index = int((tweet.timestamp - first) // HOUR)
        if tweet.timestamp < first or index >= len(starts):
            continue
        counts[index] += 1
        bin_presence = presence[index]
        for mode in modes:
            bin_presence[mode] += tweet.posteriors.get(mode, 0.0)
    return [
        TimeBin(start=starts[i], presence=presence[i], tweet_count=counts[i])
        for i in range(len(starts))
    ]


def _on_segment(x: float, y: float, x1: float, y1: float, x2: float, y2: float) -> bool:
    cross = (x - x1) * (y2 - y1) - (y - y1) * (x2 - x1)
    if cross != 0.0:
        return False
    return min(x1, x2) <= x <= max(x1, x2) and min(y1, y2) <= y <= max(y1, y2)


def _validate_ring(ring: Ring) -> None:
    if len(ring) < 4:
        raise ValueError(f"degenerate ring with {len(ring)} vertices")
    if tuple(ring[0]) != tuple(ring[-1]):
        raise ValueError("ring is not closed (first vertex != last)")


def point_in_polygon(point: GeoPoint, polygon: Polygon) -> bool:
    """Even-odd containment over (lon, lat) rings; boundary counts inside.

    Holes are later rings: a point strictly inside a hole toggles back to
    outside, but a point on a hole's edge is boundary and therefore in.
    """
    x, y = point.lon, point.lat
    inside = False
    for ring in polygon:
        _validate_ring(ring)
        for i in range(len(ring) - 1):
            x1, y1 = ring[i]
            x2, y2 = ring[i + 1]
            if _on_segment(x, y, x1, y1, x2, y2):
                return True
            if (y1 > y) != (y2 > y):
                x_at_y = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
                if x_at_y > x:
                    inside = not inside
    return inside


def _polygon_bbox(polygons: Sequence[Polygon]) -> tuple[float, float, float, float]:
    xs = [x for poly in polygons for ring in poly for x, _ in ring]
    ys = [y for poly in polygons for ring in poly for _, y in ring]
    return min(xs), min(ys), max(xs), max(ys)


def load_boundaries(path) -> list[CountyFeature]:
    """Load a feature collection of county polygons, preserving file order.

    Each feature needs a ``county_id`` property and a Polygon or
    MultiPolygon geometry with (lon, lat) coordinates.
    """
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("type") != "FeatureCollection":
        raise ValueError(f"boundary file {path} is not a FeatureCollection")
    features: list[CountyFeature] = []
    for feature in payload.get("features", []):
        properties = feature.get("properties") or {}
        county_id = properties.get("county_id")
        if not county_id:
            raise ValueError("boundary feature missing county_id property")
        geometry = feature.get("geometry") or {}
        gtype = geometry.get("type")
        coords = geometry.get("coordinates")
        if gtype == "Polygon":
            raw_polys = [coords]
        elif gtype == "MultiPolygon":
            raw_polys = coords
        else:
            raise ValueError(f"unsupported geometry type {gtype!r} for {county_id}")
        polygons = tuple(
            tuple(tuple((float(x), float(y)) for x, y in ring) for ring in poly)
            for poly in raw_polys
        )
        for poly in polygons:
            for ring in poly:
                _validate_ring(ring)
        features.append(
            CountyFeature(
                county_id=str(county_id),
                polygons=polygons,
                bbox=_polygon_bbox(polygons),
            )
        )
    return features


def locate_county(
    point: GeoPoint, counties: Sequence[CountyFeature]
) -> Optional[str]:
    """First county (file order) containing the point, if any."""
    for county in counties:
        min_x, min_y, max_x, max_y = county.bbox
        if not (min_x <= point.lon <= max_x and min_y <= point.lat <= max_y):
            continue
        for polygon in county.polygons:
            if point_in_polygon(point, polygon):
                return county.county_id
    return None


def county_activity(
    tweets: Iterable[ClassifiedTweet],
    counties: Sequence[CountyFeature],
    date_range: tuple[datetime, datetime],
) -> tuple[list[CountyStat], CountyStat]:
    """Per-county tweet counts and political-activity percentages.

    Tweets with timestamps in [start, end) are assigned to at most one
    county; the remainder land in the ``<unassigned>`` bucket so totals
    are conserved. A tweet counts as political when its combined-modes
    classification is positive. Counties with no tweets report a None
    percentage rather than a fake zero.
    """
    start, end = date_range
    if end < start:
        raise ValueError("date range end precedes start")
    tallies: dict[str, dict] = {
        county.county_id: {"count": 0, "positives": {m: 0 for m in ALL_MODES}}
        for county in counties
    }
    unassigned = {"count": 0, "positives": {m: 0 for m in ALL_MODES}}
    for tweet in sorted(tweets, key=lambda t: (t.timestamp, t.id)):
        if not (start <= tweet.timestamp < end):
            continue
        county_id = locate_county(GeoPoint(tweet.lat, tweet.lon), counties)
        bucket = tallies[county_id] if county_id is not None else unassigned
        bucket["count"] += 1
        for mode in tweet.positives:
            bucket["positives"][mode] += 1

    def to_stat(county_id: str, bucket: dict) -> CountyStat:
        count = bucket["count"]
        political = bucket["positives"][ActionMode.ALL]
        return CountyStat(
            county_id=county_id,
            tweet_count=count,
            political_pct=100.0 * political / count if count else None,
            positives=dict(bucket["positives"]),
        )

    stats = [to_stat(county.county_id, tallies[county.county_id]) for county in counties]
    return stats, to_stat(UNASSIGNED_ID, unassigned)
