"""Tokenization and lexicon-driven multiword-expression segmentation.

A document is a bag of phrases: greedy left-to-right longest-match against
a multiword lexicon, with single tokens as the fallback. The lexicon is a
first-class artifact; ``induce_lexicon`` offers a reproducible stand-in
builder based on association-thresholded n-grams for users without one.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

# Pictographs and the joiners/modifiers that glue them into one glyph.
_PICTO = "[←-⯿\U0001f000-\U0001faff]"
_JOINER = "[‍️\U0001f3fb-\U0001f3ff]"
_TOKEN_RE = re.compile(
    rf"<url>|<user>|{_PICTO}(?:{_JOINER}+{_PICTO}?)*|\w+|\S",
    re.UNICODE,
)


def tokenize(text: str) -> list[str]:
    """Split normalized text into tokens.

    Whitespace separates tokens, punctuation is detached into single-char
    tokens, the ``<url>``/``<user>`` sentinels stay intact, and emoji
    (including joined sequences) survive as single tokens.
    """
    return _TOKEN_RE.findall(text)


def phrase_length(phrase: str) -> int:
    """Token length of a canonical phrase key (tokens joined by one space)."""
    return phrase.count(" ") + 1


@dataclass(frozen=True, slots=True)
class Document:
    """A bag of phrases with integer frequencies.

    ``total_tokens`` is the token count of the source text, so
    sum(freq * token_length) over the phrase map always equals it.
    """

    phrases: dict[str, int]
    total_tokens: int

    @property
    def n_distinct(self) -> int:
        return len(self.phrases)


class MweLexicon:
    """An immutable set of multiword expressions (token length >= 2)."""

    __slots__ = ("entries", "max_len", "_by_first")

    def __init__(self, phrases: Iterable[Sequence[str]] = ()):
        entries: set[tuple[str, ...]] = set()
        for phrase in phrases:
            tokens = tuple(phrase)
            if len(tokens) < 2:
                raise ValueError(f"lexicon entries need >= 2 tokens: {tokens!r}")
            for token in tokens:
                if not token or re.search(r"\s", token):
                    raise ValueError(f"bad token in lexicon entry: {tokens!r}")
            if tokens in entries:
                raise ValueError(f"duplicate lexicon entry: {' '.join(tokens)!r}")
            entries.add(tokens)
        self.entries = frozenset(entries)
        self.max_len = max((len(e) for e in entries), default=0)
        by_first: dict[str, list[int]] = {}
        for entry in entries:
            by_first.setdefault(entry[0], []).append(len(entry))
        self._by_first = {
            first: tuple(sorted(set(lens), reverse=True))
            for first, lens in by_first.items()
        }

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, phrase: Sequence[str]) -> bool:
        return tuple(phrase) in self.entries

    def lengths_starting_with(self, token: str) -> tuple[int, ...]:
        """Candidate entry lengths (descending) beginning with ``token``."""
        return self._by_first.get(token, ())

    @classmethod
    def from_file(cls, path) -> "MweLexicon":
        """Load a lexicon file: one space-separated phrase per line.

        Lines starting with ``#`` are comments; duplicate phrase lines are
        an error.
        """
        phrases: list[tuple[str, ...]] = []
        seen: set[tuple[str, ...]] = set()
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                tokens = tuple(stripped.split())
                if tokens in seen:
                    raise ValueError(
                        f"{path}:{lineno}: duplicate lexicon entry {stripped!r}"
                    )
                seen.add(tokens)
                phrases.append(tokens)
        return cls(phrases)

    def to_file(self, path) -> None:
        """Write entries one per line, sorted for reproducible output."""
        with open(path, "w", encoding="utf-8") as handle:
            for entry in sorted(self.entries):
                handle.write(" ".join(entry) + "\n")


def segment(tokens: Sequence[str], lexicon: MweLexicon) -> Document:
    """Greedy left-to-right longest-match segmentation into a Document.

    At each position the longest lexicon entry starting there is consumed
    as one phrase; otherwise the single token is a unigram phrase. With an
    empty lexicon this is exactly a unigram bag of words.
    """
    phrases: dict[str, int] = {}
    n = len(tokens)
    i = 0
    while i < n:
        token = tokens[i]
        consumed = 1
        key = token
        for length in lexicon.lengths_starting_with(token):
            if length <= n - i and tuple(tokens[i : i + length]) in lexicon.entries:
                consumed = length
                key = " ".join(tokens[i : i + length])
                break
        phrases[key] = phrases.get(key, 0) + 1
        i += consumed
    return Document(phrases=phrases, total_tokens=n)


def segment_text(text: str, lexicon: MweLexicon) -> Document:
    """Convenience: tokenize then segment already-normalized text."""
    return segment(tokenize(text), lexicon)


@dataclass
class NgramStats:
    """Corpus counts backing lexicon induction; merging is additive."""

    token_counts: Counter = field(default_factory=Counter)
    total_tokens: int = 0
    ngram_counts: dict[int, Counter] = field(default_factory=dict)
    ngram_positions: dict[int, int] = field(default_factory=dict)

    def add(self, tokens: Sequence[str], max_len: int) -> None:
        self.token_counts.update(tokens)
        self.total_tokens += len(tokens)
        for n in range(2, max_len + 1):
            if len(tokens) < n:
                continue
            counts = self.ngram_counts.setdefault(n, Counter())
            for i in range(len(tokens) - n + 1):
                counts[tuple(tokens[i : i + n])] += 1
            self.ngram_positions[n] = self.ngram_positions.get(n, 0) + len(tokens) - n + 1

    def merge(self, other: "NgramStats") -> None:
        self.token_counts.update(other.token_counts)
        self.total_tokens += other.total_tokens
        for n, counts in other.ngram_counts.items():
            self.ngram_counts.setdefault(n, Counter()).update(counts)
        for n, positions in other.ngram_positions.items():
            self.ngram_positions[n] = self.ngram_positions.get(n, 0) + positions


def association_score(stats: NgramStats, gram: tuple[str, ...]) -> float:
    """Length-normalized pointwise association of an n-gram.

    log10 of the ratio between the n-gram's empirical probability and the
    product of its token probabilities, divided by (n - 1) so scores are
    comparable across lengths. Positive means the tokens co-occur more
    than independence predicts.
    """
    n = len(gram)
    count = stats.ngram_counts.get(n, Counter()).get(gram, 0)
    if count == 0:
        raise ValueError(f"n-gram not in corpus: {gram!r}")
    p_gram = count / stats.ngram_positions[n]
    log_indep = sum(
        math.log10(stats.token_counts[token] / stats.total_tokens) for token in gram
    )
    return (math.log10(p_gram) - log_indep) / (n - 1)


def induce_lexicon(
    corpus: Iterable[Sequence[str]],
    min_count: int = 25,
    min_score: float = 1.0,
    max_len: int = 4,
) -> MweLexicon:
    """Build a multiword lexicon from a token-list corpus.

    Keeps every n-gram (2 <= n <= max_len) whose corpus count reaches
    ``min_count`` and whose association score reaches ``min_score``.
    Deterministic given the corpus counts; sharded counting merges
    associatively via NgramStats.merge.
    """
    if not 2 <= max_len <= 6:
        raise ValueError("max_len must be in [2, 6]")
    stats = NgramStats()
    empty = True
    for tokens in corpus:
        empty = False
        stats.add(tokens, max_len)
    if empty:
        raise ValueError("cannot induce a lexicon from an empty corpus")
    selected = [
        gram
        for n, counts in sorted(stats.ngram_counts.items())
        for gram, count in counts.items()
        if count >= min_count and association_score(stats, gram) >= min_score
    ]
    return MweLexicon(selected)


def documents_from_texts(
    texts: Iterable[str], lexicon: MweLexicon
) -> Iterator[Document]:
    for text in texts:
        yield segment_text(text, lexicon)
