"""Parsing, normalization, and spatiotemporal filtering of message records.

Input is UTF-8 newline-delimited JSON, one flat object per line. Records
that fail validation are rejected with a stable reason code so callers can
keep conservation counts; a record is never partially parsed.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Iterable, Iterator, Mapping, Optional, Union

from .modes import ActionMode, ATOMIC_MODES

# Rejection reason codes, tallied by callers.
REASON_MALFORMED = "malformed-record"
REASON_MISSING_FIELD = "missing-field"
REASON_BAD_TIMESTAMP = "bad-timestamp"
REASON_BAD_COORDINATE = "bad-coordinate"
REASON_COORD_RANGE = "coordinate-out-of-range"
REASON_EMPTY_TEXT = "empty-text"
REASON_INVALID_LABEL = "invalid-label"


@dataclass(frozen=True, slots=True)
class Tweet:
    """One validated geo-tagged message record."""

    id: str
    timestamp: datetime  # aware UTC, second precision
    lat: float  # degrees in [-90, 90]
    lon: float  # degrees in (-180, 180]
    text: str
    labels: Optional[frozenset[ActionMode]] = None  # coded training data only


@dataclass(frozen=True, slots=True)
class Rejection:
    """A typed parse failure for one input line."""

    reason: str
    detail: str


@dataclass(frozen=True, slots=True)
class EventWindow:
    """A documented event site: spatial disc plus a closed time interval."""

    label: str
    lat: float
    lon: float
    radius_m: float
    start: datetime
    end: datetime


@dataclass(frozen=True, slots=True)
class ClassifiedTweet:
    """A tweet after batch classification: per-mode posteriors + positives."""

    id: str
    timestamp: datetime
    lat: float
    lon: float
    text: str
    posteriors: Mapping[ActionMode, float]
    positives: frozenset[ActionMode]


def parse_instant(value: str) -> datetime:
    """Parse an ISO-8601 timestamp to an aware UTC datetime (whole seconds).

    Accepts a trailing ``Z`` or an explicit offset; naive timestamps are
    rejected. Sub-second precision is truncated.
    """
    if not isinstance(value, str):
        raise ValueError("timestamp must be a string")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        raise ValueError(f"timestamp lacks a UTC offset: {value!r}")
    return parsed.astimezone(timezone.utc).replace(microsecond=0)


def format_instant(value: datetime) -> str:
    """Render an aware UTC datetime as ``YYYY-MM-DDTHH:MM:SSZ``."""
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_HASHTAG_RE = re.compile(r"#+(\w)")
_MENTION_RE = re.compile(r"@\w+")
_WS_RE = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Normalize raw message text for segmentation.

    URLs become ``<url>``, user mentions become ``<user>``, hashtag marks
    are stripped so the tag word survives as a plain token, everything is
    lowercased, and whitespace runs collapse to single spaces. Idempotent.
    """
    text = _URL_RE.sub("<url>", text)
    text = _HASHTAG_RE.sub(r"\1", text)
    text = _MENTION_RE.sub("<user>", text)
    text = text.lower()
    return _WS_RE.sub(" ", text).strip()


def _coord(raw: object) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise TypeError("coordinate must be a number")
    return float(raw)


def parse_tweet_record(line: str) -> Union[Tweet, Rejection]:
    """Parse one NDJSON line into a Tweet, or a typed Rejection.

    Required keys: ``id``, ``ts``, ``lat``, ``lon``, ``text``. Optional
    ``labels`` is a list of atomic mode names. Coordinates outside
    lat [-90, 90] / lon (-180, 180] are rejected, never clamped; text that
    normalizes to the empty string is rejected.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        return Rejection(REASON_MALFORMED, f"not valid JSON: {exc.msg}")
    if not isinstance(raw, dict):
        return Rejection(REASON_MALFORMED, "record is not an object")

    for key in ("id", "ts", "lat", "lon", "text"):
        if key not in raw:
            return Rejection(REASON_MISSING_FIELD, f"missing key {key!r}")

    tweet_id = raw["id"]
    if not isinstance(tweet_id, str) or not tweet_id:
        return Rejection(REASON_MISSING_FIELD, "id must be a non-empty string")

    try:
        timestamp = parse_instant(raw["ts"])
    except (ValueError, TypeError) as exc:
        return Rejection(REASON_BAD_TIMESTAMP, str(exc))

    try:
        lat = _coord(raw["lat"])
        lon = _coord(raw["lon"])
    except TypeError as exc:
        return Rejection(REASON_BAD_COORDINATE, str(exc))
    if not (-90.0 <= lat <= 90.0) or not (-180.0 < lon <= 180.0):
        return Rejection(REASON_COORD_RANGE, f"lat={lat!r} lon={lon!r}")

    text = raw["text"]
    if not isinstance(text, str):
        return Rejection(REASON_MISSING_FIELD, "text must be a string")
    if not normalize_text(text):
        return Rejection(REASON_EMPTY_TEXT, "text is empty after normalization")

    labels: Optional[frozenset[ActionMode]] = None
    if "labels" in raw and raw["labels"] is not None:
        if not isinstance(raw["labels"], list):
            return Rejection(REASON_INVALID_LABEL, "labels must be a list")
        parsed_labels = set()
        for name in raw["labels"]:
            try:
                mode = ActionMode.from_name(name)
            except ValueError as exc:
                return Rejection(REASON_INVALID_LABEL, str(exc))
            if mode not in ATOMIC_MODES:
                return Rejection(
                    REASON_INVALID_LABEL, f"label {name!r} is not an atomic mode"
                )
            parsed_labels.add(mode)
        labels = frozenset(parsed_labels)

    return Tweet(id=tweet_id, timestamp=timestamp, lat=lat, lon=lon, text=text, labels=labels)


def tweet_to_record(tweet: Tweet) -> dict:
    """Invert parse_tweet_record: a flat dict ready for NDJSON output."""
    record = {
        "id": tweet.id,
        "ts": format_instant(tweet.timestamp),
        "lat": tweet.lat,
        "lon": tweet.lon,
        "text": tweet.text,
    }
    if tweet.labels is not None:
        record["labels"] = sorted(mode.wire_name for mode in tweet.labels)
    return record


def parse_stream(lines: Iterable[str]) -> Iterator[Union[Tweet, Rejection]]:
    """Parse an NDJSON stream, yielding tweets and rejections in order.

    Blank lines are skipped without a rejection.
    """
    for line in lines:
        if not line.strip():
            continue
        yield parse_tweet_record(line)


def read_tweets(path) -> tuple[list[Tweet], Counter]:
    """Read an NDJSON file; return the valid tweets plus rejection tallies."""
    tweets: list[Tweet] = []
    rejected: Counter = Counter()
    with open(path, encoding="utf-8") as handle:
        for item in parse_stream(handle):
            if isinstance(item, Tweet):
                tweets.append(item)
            else:
                rejected[item.reason] += 1
    return tweets, rejected


def parse_window_record(line: str) -> EventWindow:
    """Parse one event-window NDJSON line; raises on any invalid field."""
    raw = json.loads(line)
    if not isinstance(raw, dict):
        raise ValueError("event window record is not an object")
    for key in ("label", "lat", "lon", "radius_m", "start", "end"):
        if key not in raw:
            raise ValueError(f"event window missing key {key!r}")
    lat = _coord(raw["lat"])
    lon = _coord(raw["lon"])
    if not (-90.0 <= lat <= 90.0) or not (-180.0 < lon <= 180.0):
        raise ValueError(f"event window center out of range: {lat}, {lon}")
    radius = float(raw["radius_m"])
    if radius <= 0:
        raise ValueError("event window radius_m must be > 0")
    start = parse_instant(raw["start"])
    end = parse_instant(raw["end"])
    if not start < end:
        raise ValueError("event window start must precede end")
    return EventWindow(
        label=str(raw["label"]), lat=lat, lon=lon, radius_m=radius, start=start, end=end
    )


def read_windows(path) -> list[EventWindow]:
    """Read an event-window NDJSON file; windows are config, so any bad line raises."""
    windows = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                windows.append(parse_window_record(line))
    return windows


def protest_filter(
    tweets: Iterable[Tweet], windows: list[EventWindow]
) -> Iterator[tuple[Tweet, tuple[str, ...]]]:
    """Keep tweets inside at least one event window's disc and time span.

    Time intervals are closed on both ends; the spatial test is
    great-circle distance <= radius_m. Yields ``(tweet, matched_labels)``
    in input order. An empty window list is an error: silently passing
    everything through would be a footgun.
    """
    from .geo import haversine  # local import: geo owns the distance math

    if not windows:
        raise ValueError("protest_filter requires at least one event window")
    for tweet in tweets:
        matched = tuple(
            w.label
            for w in windows
            if w.start <= tweet.timestamp <= w.end
            and haversine(tweet.lat, tweet.lon, w.lat, w.lon) <= w.radius_m
        )
        if matched:
            yield tweet, matched


def classified_to_record(tweet: ClassifiedTweet, extra: Optional[dict] = None) -> dict:
    """Render a classified tweet as a flat output record."""
    record = {
        "id": tweet.id,
        "ts": format_instant(tweet.timestamp),
        "lat": tweet.lat,
        "lon": tweet.lon,
        "text": tweet.text,
        "posteriors": {m.wire_name: p for m, p in tweet.posteriors.items()},
        "positives": sorted(m.wire_name for m in tweet.positives),
    }
    if extra:
        record.update(extra)
    return record


def parse_classified_record(line: str) -> ClassifiedTweet:
    """Parse one classified-stream line; raises on malformed records.

    Classified streams are produced by this toolkit, so errors here mean a
    wrong or stale input file rather than dirty data.
    """
    raw = json.loads(line)
    if not isinstance(raw, dict) or "posteriors" not in raw or "positives" not in raw:
        raise ValueError(
            "not a classified stream record (expected posteriors/positives keys)"
        )
    posteriors = {
        ActionMode.from_name(name): float(p) for name, p in raw["posteriors"].items()
    }
    positives = frozenset(ActionMode.from_name(name) for name in raw["positives"])
    return ClassifiedTweet(
        id=str(raw["id"]),
        timestamp=parse_instant(raw["ts"]),
        lat=float(raw["lat"]),
        lon=float(raw["lon"]),
        text=str(raw["text"]),
        posteriors=posteriors,
        positives=positives,
    )


def read_classified(path) -> list[ClassifiedTweet]:
    """Read a classified NDJSON stream produced by the classify command."""
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                records.append(parse_classified_record(line))
    return records


def floor_hour(value: datetime) -> datetime:
    """Truncate an instant down to its containing UTC hour."""
    return value.astimezone(timezone.utc).replace(minute=0, second=0, microsecond=0)


HOUR = timedelta(hours=1)
