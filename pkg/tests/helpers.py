"""Independent oracles and small generators shared by the test modules.

Each oracle recomputes a contract by a different route than the library
(exact rationals, exhaustive sweeps, transitive closures) so agreement is
evidence, not tautology.
"""

from __future__ import annotations

import math
import random
from datetime import datetime, timedelta, timezone
from fractions import Fraction
from types import SimpleNamespace

from actionscope.classify import precision_recall_f1
from actionscope.geo import haversine
from actionscope.segment import Document


def exact_posterior(train_docs, probe, alpha) -> Fraction:
    """Bayes-rule posterior in exact rational arithmetic.

    ``train_docs`` is a list of (phrase->freq dict, positive flag);
    ``probe`` is a phrase->freq dict. Replicates multinomial training with
    additive smoothing entirely in Fractions.
    """
    alpha = Fraction(alpha)
    vocab: dict[str, None] = {}
    counts = {True: {}, False: {}}
    occurrences = {True: 0, False: 0}
    n_docs = {True: 0, False: 0}
    for phrases, positive in train_docs:
        n_docs[positive] += 1
        for phrase, freq in phrases.items():
            vocab[phrase] = None
            counts[positive][phrase] = counts[positive].get(phrase, 0) + freq
            occurrences[positive] += freq
    v = len(vocab)
    total = n_docs[True] + n_docs[False]

    def likelihood(phrase: str, positive: bool) -> Fraction:
        count = counts[positive].get(phrase, 0)
        return (count + alpha) / (occurrences[positive] + alpha * v)

    joint = {}
    for positive in (True, False):
        value = Fraction(n_docs[positive], total)
        for phrase, freq in probe.items():
            value *= likelihood(phrase, positive) ** freq
        joint[positive] = value
    return joint[True] / (joint[True] + joint[False])


def sweep_tune_oracle(scores):
    """Exhaustive threshold sweep over all distinct posteriors.

    Returns (threshold, precision, recall, f1) with ties broken toward the
    larger threshold, recomputing the confusion counts from scratch at
    every candidate.
    """
    candidates = sorted({p for p, _ in scores}, reverse=True)
    total_pos = sum(1 for _, label in scores if label)
    best = None
    for threshold in candidates:
        tp = sum(1 for p, label in scores if p >= threshold and label)
        fp = sum(1 for p, label in scores if p >= threshold and not label)
        fn = total_pos - tp
        precision, recall, f1 = precision_recall_f1(tp, fp, fn)
        if best is None or f1 > best[3]:
            best = (threshold, precision, recall, f1)
    return best


def greedy_segment_oracle(tokens, entries, max_len):
    """Longest-match-first segmentation via memoized recursion.

    ``entries`` is a set of token tuples. Independent of the library's
    iterative first-token index.
    """
    n = len(tokens)
    result: dict[str, int] = {}

    def consume(i: int) -> None:
        if i >= n:
            return
        for length in range(min(max_len, n - i), 1, -1):
            candidate = tuple(tokens[i : i + length])
            if candidate in entries:
                key = " ".join(candidate)
                result[key] = result.get(key, 0) + 1
                consume(i + length)
                return
        result[tokens[i]] = result.get(tokens[i], 0) + 1
        consume(i + 1)

    consume(0)
    return result


def dbscan_oracle(points, eps_m, min_pts):
    """Transitive closure over the eps-graph, replicating border rules.

    Core points have >= min_pts neighbors (self included). Clusters are
    connected components of cores; a border point joins the component
    whose minimal core index (in sorted point order) is smallest among
    its adjacent cores. Returns frozensets of member ids, plus noise ids.
    """
    ordered = sorted(points, key=lambda p: (p.timestamp, p.id))
    n = len(ordered)
    adjacent = [
        [
            j
            for j in range(n)
            if haversine(ordered[i].lat, ordered[i].lon, ordered[j].lat, ordered[j].lon)
            <= eps_m
        ]
        for i in range(n)
    ]
    core = [len(adjacent[i]) >= min_pts for i in range(n)]
    component = [-1] * n
    components: list[list[int]] = []
    for i in range(n):
        if not core[i] or component[i] != -1:
            continue
        stack = [i]
        component[i] = len(components)
        members = [i]
        while stack:
            current = stack.pop()
            for j in adjacent[current]:
                if core[j] and component[j] == -1:
                    component[j] = component[i]
                    members.append(j)
                    stack.append(j)
        components.append(members)
    clusters: dict[int, set[str]] = {
        idx: {ordered[i].id for i in members} for idx, members in enumerate(components)
    }
    noise = set()
    for i in range(n):
        if core[i]:
            continue
        adjacent_components = sorted(
            {component[j] for j in adjacent[i] if core[j]}
        )
        if adjacent_components:
            clusters[adjacent_components[0]].add(ordered[i].id)
        else:
            noise.add(ordered[i].id)
    return {frozenset(members) for members in clusters.values()}, noise


def winding_number_contains(point, polygon) -> bool:
    """Nonzero winding rule; agrees with even-odd for properly oriented holes."""
    x, y = point.lon, point.lat
    winding = 0
    for ring in polygon:
        for i in range(len(ring) - 1):
            x1, y1 = ring[i]
            x2, y2 = ring[i + 1]
            if y1 <= y:
                if y2 > y and _is_left(x1, y1, x2, y2, x, y) > 0:
                    winding += 1
            elif y2 <= y and _is_left(x1, y1, x2, y2, x, y) < 0:
                winding -= 1
    return winding != 0


def _is_left(x1, y1, x2, y2, x, y) -> float:
    return (x2 - x1) * (y - y1) - (x - x1) * (y2 - y1)


BASE_TIME = datetime(2014, 8, 11, 0, 0, 0, tzinfo=timezone.utc)


def make_point(pid, lat, lon, seconds=0):
    return SimpleNamespace(
        id=pid,
        timestamp=BASE_TIME + timedelta(seconds=seconds),
        lat=lat,
        lon=lon,
    )


def random_geo_instance(rng: random.Random, n_points: int, spread_m: float = 600.0):
    """A pocket of points around one site, in meters-scaled offsets."""
    base_lat, base_lon = 38.75, -90.27
    points = []
    for i in range(n_points):
        dlat = rng.uniform(-spread_m, spread_m) / 111_320.0
        dlon = rng.uniform(-spread_m, spread_m) / (
            111_320.0 * math.cos(math.radians(base_lat))
        )
        points.append(make_point(f"p{i:03d}", base_lat + dlat, base_lon + dlon, seconds=i))
    return points


def doc(phrases: dict[str, int]) -> Document:
    """Document from a phrase map; token count derived from the keys."""
    total = sum(freq * (phrase.count(" ") + 1) for phrase, freq in phrases.items())
    return Document(phrases=dict(phrases), total_tokens=total)
