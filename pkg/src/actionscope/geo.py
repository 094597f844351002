"""Density clustering of geo-tagged tweets and per-cluster summaries.

Clustering is density-based: core points have at least ``min_pts``
neighbors (themselves included) within ``eps_m`` by great-circle
distance; clusters are the connected components of core points plus any
border points they reach, and everything else is noise. Points are
processed in (timestamp, id) order so results are independent of input
order, and a border point reachable from several clusters always joins
the first-discovered one.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .modes import ActionMode

EARTH_RADIUS_M = 6_371_000.0


class GeoPoint(NamedTuple):
    lat: float
    lon: float


def haversine(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters (mean Earth radius 6,371 km)."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    a = (
        math.sin(dphi / 2.0) ** 2
        + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


@dataclass(frozen=True, slots=True)
class Cluster:
    """One spatial cluster with its positive-classification fractions."""

    member_ids: tuple[str, ...]
    centroid: GeoPoint
    radius_m: float
    count: int
    positive_fraction: dict[ActionMode, float]


def _haversine_row(
    lat_rad: np.ndarray, lon_rad: np.ndarray, i: int
) -> np.ndarray:
    dphi = lat_rad - lat_rad[i]
    dlam = lon_rad - lon_rad[i]
    a = (
        np.sin(dphi / 2.0) ** 2
        + np.cos(lat_rad[i]) * np.cos(lat_rad) * np.sin(dlam / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(a)))


def _cluster_sorted(points: Sequence, eps_m: float, min_pts: int) -> list[list]:
    n = len(points)
    lat_rad = np.radians(np.array([p.lat for p in points], dtype=np.float64))
    lon_rad = np.radians(np.array([p.lon for p in points], dtype=np.float64))
    neighbors: list[np.ndarray] = []
    for i in range(n):
        close = np.nonzero(_haversine_row(lat_rad, lon_rad, i) <= eps_m)[0]
        neighbors.append(close)
    core = [len(nbrs) >= min_pts for nbrs in neighbors]

    assignment = [-1] * n
    clusters: list[list] = []
    for seed in range(n):
        if not core[seed] or assignment[seed] != -1:
            continue
        cluster_id = len(clusters)
        members: list[int] = []
        queue: deque[int] = deque([seed])
        assignment[seed] = cluster_id
        members.append(seed)
        while queue:
            current = queue.popleft()
            for nbr in neighbors[current]:
                nbr = int(nbr)
                if assignment[nbr] != -1:
                    continue
                assignment[nbr] = cluster_id
                members.append(nbr)
                if core[nbr]:
                    queue.append(nbr)
        clusters.append(sorted(members))
    return [[points[i] for i in members] for members in clusters]


def cluster_window(points: Sequence, eps_m: float, min_pts: int) -> list[list]:
    """Cluster one time window's tweets; returns member lists per cluster.

    Points need ``id``, ``timestamp``, ``lat``, ``lon`` attributes. Noise
    points appear in no cluster. If the window spans the antimeridian the
    two hemispheres are clustered separately (a documented simplification;
    protest activity windows are city-scale in practice).
    """
    if eps_m <= 0:
        raise ValueError("eps_m must be positive")
    if min_pts < 1:
        raise ValueError("min_pts must be >= 1")
    ordered = sorted(points, key=lambda p: (p.timestamp, p.id))
    if not ordered:
        return []
    lons = [p.lon for p in ordered]
    if max(lons) - min(lons) > 180.0:
        east = [p for p in ordered if p.lon >= 0.0]
        west = [p for p in ordered if p.lon < 0.0]
        first, second = (east, west) if ordered[0].lon >= 0.0 else (west, east)
        return _cluster_sorted(first, eps_m, min_pts) + _cluster_sorted(
            second, eps_m, min_pts
        )
    return _cluster_sorted(ordered, eps_m, min_pts)


def centroid_of(points: Sequence[GeoPoint]) -> GeoPoint:
    """Arithmetic mean of coordinates; fine for city-scale clusters."""
    return GeoPoint(
        lat=sum(p.lat for p in points) / len(points),
        lon=sum(p.lon for p in points) / len(points),
    )


def cluster_summary(
    members: Sequence, thresholds: Mapping[ActionMode, float]
) -> Cluster:
    """Summarize one cluster's extent and positive-classification shares.

    Members carry per-mode ``posteriors``; a member counts as positive for
    a mode when its posterior meets that mode's threshold. ``radius_m`` is
    the maximum member distance from the centroid, standing in for the
    area tweets emerged from.
    """
    if not members:
        raise ValueError("cluster_summary requires at least one member")
    center = centroid_of([GeoPoint(m.lat, m.lon) for m in members])
    radius = max(haversine(m.lat, m.lon, center.lat, center.lon) for m in members)
    count = len(members)
    fractions = {
        mode: sum(1 for m in members if m.posteriors.get(mode, 0.0) >= cutoff) / count
        for mode, cutoff in thresholds.items()
    }
    return Cluster(
        member_ids=tuple(m.id for m in members),
        centroid=center,
        radius_m=radius,
        count=count,
        positive_fraction=fractions,
    )


def summarize_positives(members: Sequence, modes: Sequence[ActionMode]) -> Cluster:
    """Like cluster_summary, but trusts each member's ``positives`` set.

    Used when the stream already records threshold decisions, so the
    fractions are identical to recomputing them from posteriors.
    """
    if not members:
        raise ValueError("summarize_positives requires at least one member")
    center = centroid_of([GeoPoint(m.lat, m.lon) for m in members])
    radius = max(haversine(m.lat, m.lon, center.lat, center.lon) for m in members)
    count = len(members)
    fractions = {
        mode: sum(1 for m in members if mode in m.positives) / count for mode in modes
    }
    return Cluster(
        member_ids=tuple(m.id for m in members),
        centroid=center,
        radius_m=radius,
        count=count,
        positive_fraction=fractions,
    )
