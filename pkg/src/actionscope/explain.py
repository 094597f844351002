"""Phrase shifts: per-phrase contributions to a binary classification.

Each phrase contributes frequency * (log10 positive likelihood - log10
negative likelihood); positive contributions pull toward the positive
class. The contributions of a document sum to its posterior log-odds
minus the prior log-odds, so a shift is an exact decomposition of the
classifier's decision, not a heuristic attribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .classify import BayesModel
from .modes import ActionMode
from .segment import Document

# Reserved entry that pools out-of-vocabulary phrases, so the shift total
# still decomposes the score exactly.
OOV_PHRASE = "<oov>"

SCOPE_DOCUMENT = "document"
SCOPE_AGGREGATE = "aggregate"


@dataclass(frozen=True, slots=True)
class ShiftEntry:
    phrase: str
    contribution: float
    frequency: int


@dataclass(frozen=True, slots=True)
class PhraseShift:
    """Ranked per-phrase contributions for one mode.

    Entries are sorted by absolute contribution descending with
    lexicographic phrase tie-breaking; ``total`` is the left-to-right sum
    of the sorted entries' contributions.
    """

    mode: ActionMode
    scope: str
    doc_count: int
    entries: tuple[ShiftEntry, ...]
    total: float


def _shift_from_frequencies(
    model: BayesModel, frequencies: dict[str, int], scope: str, doc_count: int
) -> PhraseShift:
    loglik = model.loglik
    oov_delta = model.unseen_pos - model.unseen_neg
    entries: list[ShiftEntry] = []
    oov_freq = 0
    for phrase, freq in frequencies.items():
        pair = loglik.get(phrase)
        if pair is None:
            oov_freq += freq
        else:
            entries.append(ShiftEntry(phrase, freq * (pair[0] - pair[1]), freq))
    if oov_freq:
        entries.append(ShiftEntry(OOV_PHRASE, oov_freq * oov_delta, oov_freq))
    entries.sort(key=lambda e: (-abs(e.contribution), e.phrase))
    total = 0.0
    for entry in entries:
        total += entry.contribution
    return PhraseShift(
        mode=model.mode,
        scope=scope,
        doc_count=doc_count,
        entries=tuple(entries),
        total=total,
    )


def shift_single(model: BayesModel, doc: Document) -> PhraseShift:
    """Explain one document's classification under one model."""
    return _shift_from_frequencies(model, doc.phrases, SCOPE_DOCUMENT, 1)


def merge_frequencies(docs: Iterable[Document]) -> dict[str, int]:
    """Sum the phrase frequency maps of several documents."""
    merged: dict[str, int] = {}
    for doc in docs:
        for phrase, freq in doc.phrases.items():
            merged[phrase] = merged.get(phrase, 0) + freq
    return merged


def shift_aggregate(model: BayesModel, docs: Sequence[Document]) -> PhraseShift:
    """Explain a set of documents as one shift.

    Contributions are computed from the summed frequency map, which equals
    summing per-document contributions since each is linear in frequency.
    """
    if not docs:
        raise ValueError("shift_aggregate requires at least one document")
    return _shift_from_frequencies(
        model, merge_frequencies(docs), SCOPE_AGGREGATE, len(docs)
    )


def shift_to_export(
    shift: PhraseShift, top_k: int = 30, window: dict | None = None
) -> dict:
    """Render a shift for export, truncated for display.

    ``total`` always reflects the full untruncated sum.
    """
    truncated = top_k is not None and len(shift.entries) > top_k
    shown = shift.entries[:top_k] if truncated else shift.entries
    payload = {
        "mode": shift.mode.wire_name,
        "scope": shift.scope,
        "doc_count": shift.doc_count,
        "entries": [
            {
                "phrase": entry.phrase,
                "contribution": entry.contribution,
                "frequency": entry.frequency,
            }
            for entry in shown
        ],
        "total": shift.total,
        "truncated": truncated,
    }
    if window is not None:
        payload["window"] = window
    return payload
