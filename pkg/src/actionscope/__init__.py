"""actionscope: social-action event detection over geo-tagged short texts.

Pipeline stages: ingest raw NDJSON records, segment text into phrase
documents, classify them with per-mode binary Bayes models, then explain
(phrase shifts), cluster (geo), and aggregate (hourly presence, county
table). The cli module binds the stages; the service module exposes the
exports read-only.
"""

from .modes import ActionMode, ATOMIC_MODES, ALL_MODES, collapse_labels, projects_positive
from .ingest import Tweet, EventWindow, ClassifiedTweet, normalize_text, protest_filter
# NB: the segment() operation lives at actionscope.segment.segment; the bare
# name is not re-exported here so the submodule attribute stays a module.
from .segment import Document, MweLexicon, tokenize, segment_text, induce_lexicon
from .classify import (
    BayesModel,
    EvalReport,
    LabeledDoc,
    class_score,
    cross_validate,
    holdout_evaluate,
    posterior,
    train_mode,
    tune_threshold,
)
from .explain import PhraseShift, shift_aggregate, shift_single
from .geo import Cluster, GeoPoint, cluster_summary, cluster_window, haversine
from .analytics import CountyStat, TimeBin, county_activity, hourly_presence, point_in_polygon

__version__ = "0.1.0"

__all__ = [
    "ActionMode",
    "ATOMIC_MODES",
    "ALL_MODES",
    "collapse_labels",
    "projects_positive",
    "Tweet",
    "EventWindow",
    "ClassifiedTweet",
    "normalize_text",
    "protest_filter",
    "Document",
    "MweLexicon",
    "tokenize",
    "segment_text",
    "induce_lexicon",
    "BayesModel",
    "EvalReport",
    "LabeledDoc",
    "class_score",
    "cross_validate",
    "holdout_evaluate",
    "posterior",
    "train_mode",
    "tune_threshold",
    "PhraseShift",
    "shift_aggregate",
    "shift_single",
    "Cluster",
    "GeoPoint",
    "cluster_summary",
    "cluster_window",
    "haversine",
    "CountyStat",
    "TimeBin",
    "county_activity",
    "hourly_presence",
    "point_in_polygon",
    "__version__",
]
