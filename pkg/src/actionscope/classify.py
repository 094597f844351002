"""Binary naive Bayes classifiers over phrase features, one per action mode.

Training is multinomial with additive smoothing; scores are kept in log10
space and are linear in phrase frequencies. Thresholds on the posterior
are tuned to maximize F1, mirroring how the classifiers are evaluated:
stratified k-fold cross-validation plus an out-of-domain holdout protocol.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, NamedTuple, Optional, Sequence

from .modes import ActionMode, ALL_MODES, projects_positive
from .segment import Document, MweLexicon

MODEL_SCHEMA = "actionscope.model/v1"
BUNDLE_SCHEMA = "actionscope.bundle/v1"

# Exponent clamp for the posterior's 10**gap; keeps extreme score gaps
# finite instead of overflowing.
_MAX_EXPONENT = 300.0


@dataclass(frozen=True, slots=True)
class LabeledDoc:
    """A segmented document with its coded atomic labels."""

    id: str
    doc: Document
    labels: frozenset[ActionMode]


@dataclass
class BayesModel:
    """A trained binary classifier for one action mode.

    ``loglik`` maps each phrase to its (positive, negative) log10
    likelihoods; ``unseen_pos``/``unseen_neg`` cover out-of-vocabulary
    phrases with the same smoothing at count zero.
    """

    mode: ActionMode
    alpha: float
    log_prior_pos: float
    log_prior_neg: float
    loglik: dict[str, tuple[float, float]]
    unseen_pos: float
    unseen_neg: float
    vocab_size: int
    threshold: float = 0.5


class TunedThreshold(NamedTuple):
    threshold: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True, slots=True)
class FoldResult:
    fold: int
    threshold: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    test_size: int
    test_positives: int


@dataclass(frozen=True, slots=True)
class EvalReport:
    """Evaluation summary for one mode: pooled metrics plus per-fold rows."""

    mode: ActionMode
    abundance: int
    threshold: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    folds: tuple[FoldResult, ...] = ()
    flags: tuple[str, ...] = ()


def train_mode(
    docs: Sequence[tuple[Document, bool]],
    mode: ActionMode,
    alpha: float = 1.0,
) -> BayesModel:
    """Train one binary multinomial naive Bayes model.

    Likelihoods are (count(w, c) + alpha) / (occurrences(c) + alpha * V)
    with V the phrase vocabulary over both classes; priors come from
    document counts. The threshold starts at 0.5 until tuned.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    pos_counts: dict[str, int] = {}
    neg_counts: dict[str, int] = {}
    pos_occurrences = 0
    neg_occurrences = 0
    n_pos = 0
    n_neg = 0
    vocab: dict[str, None] = {}
    for doc, positive in docs:
        if positive:
            counts = pos_counts
            n_pos += 1
        else:
            counts = neg_counts
            n_neg += 1
        subtotal = 0
        for phrase, freq in doc.phrases.items():
            counts[phrase] = counts.get(phrase, 0) + freq
            subtotal += freq
            vocab[phrase] = None
        if positive:
            pos_occurrences += subtotal
        else:
            neg_occurrences += subtotal
    if n_pos == 0 or n_neg == 0:
        raise ValueError(
            f"degenerate training set for {mode.wire_name}: "
            f"{n_pos} positive / {n_neg} negative documents"
        )
    v = len(vocab)
    denom_pos = pos_occurrences + alpha * v
    denom_neg = neg_occurrences + alpha * v
    loglik = {
        phrase: (
            math.log10((pos_counts.get(phrase, 0) + alpha) / denom_pos),
            math.log10((neg_counts.get(phrase, 0) + alpha) / denom_neg),
        )
        for phrase in vocab
    }
    total = n_pos + n_neg
    return BayesModel(
        mode=mode,
        alpha=alpha,
        log_prior_pos=math.log10(n_pos / total),
        log_prior_neg=math.log10(n_neg / total),
        loglik=loglik,
        unseen_pos=math.log10(alpha / denom_pos),
        unseen_neg=math.log10(alpha / denom_neg),
        vocab_size=v,
        threshold=0.5,
    )


def class_score(model: BayesModel, doc: Document, positive: bool) -> float:
    """Log10 joint score of a document under one class.

    Returns log-prior plus the frequency-weighted sum of per-phrase log10
    likelihoods; out-of-vocabulary phrases use the unseen likelihood. The
    negated sum (without the prior) is the entropy-style reading of the
    same quantity.
    """
    idx = 0 if positive else 1
    unseen = model.unseen_pos if positive else model.unseen_neg
    loglik = model.loglik
    score = model.log_prior_pos if positive else model.log_prior_neg
    for phrase, freq in doc.phrases.items():
        pair = loglik.get(phrase)
        score += freq * (pair[idx] if pair is not None else unseen)
    return score


def posterior(model: BayesModel, doc: Document) -> float:
    """Posterior probability of the positive class, numerically stable.

    Equals 1 / (1 + 10**(score_neg - score_pos)); the exponent is clamped
    so extreme score gaps saturate at 0 or 1 instead of overflowing.
    """
    loglik = model.loglik
    unseen_pos = model.unseen_pos
    unseen_neg = model.unseen_neg
    score_pos = model.log_prior_pos
    score_neg = model.log_prior_neg
    for phrase, freq in doc.phrases.items():
        pair = loglik.get(phrase)
        if pair is not None:
            score_pos += freq * pair[0]
            score_neg += freq * pair[1]
        else:
            score_pos += freq * unseen_pos
            score_neg += freq * unseen_neg
    gap = score_neg - score_pos
    if gap > _MAX_EXPONENT:
        gap = _MAX_EXPONENT
    elif gap < -_MAX_EXPONENT:
        gap = -_MAX_EXPONENT
    return 1.0 / (1.0 + 10.0**gap)


def precision_recall_f1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """P/R/F1 as percentages, with the 0-denominator convention of 0."""
    precision = 100.0 * tp / (tp + fp) if tp + fp else 0.0
    recall = 100.0 * tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )
    return precision, recall, f1


def tune_threshold(scores: Sequence[tuple[float, bool]]) -> TunedThreshold:
    """Pick the posterior cutoff maximizing F1 (positive iff p >= cutoff).

    Candidates are the distinct observed posteriors; ties break toward the
    larger threshold, favoring precision. Requires at least one positive
    example, otherwise F1 is undefined.
    """
    total_pos = sum(1 for _, label in scores if label)
    if total_pos == 0:
        raise ValueError("tune_threshold needs at least one positive example")
    ordered = sorted(scores, key=lambda pair: -pair[0])
    best: Optional[TunedThreshold] = None
    tp = 0
    seen = 0
    i = 0
    n = len(ordered)
    while i < n:
        value = ordered[i][0]
        while i < n and ordered[i][0] == value:
            if ordered[i][1]:
                tp += 1
            seen += 1
            i += 1
        precision, recall, f1 = precision_recall_f1(tp, seen - tp, total_pos - tp)
        if best is None or f1 > best.f1:
            best = TunedThreshold(value, precision, recall, f1)
    return best


def _project(corpus: Sequence[LabeledDoc], mode: ActionMode) -> list[bool]:
    return [projects_positive(mode, example.labels) for example in corpus]


def _derive_seed(*parts) -> int:
    """Stable sub-seed from mixed parts; str hashing is process-randomized."""
    blob = ":".join(str(part) for part in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _stratified_split(
    indices: Sequence[int],
    positive: Sequence[bool],
    fraction: float,
    rng: random.Random,
) -> tuple[list[int], list[int]]:
    """Split indices into (main, held-out) keeping the positive rate.

    Guarantees both slices contain at least one positive and one negative
    when the input allows it.
    """
    pos = [i for i in indices if positive[i]]
    neg = [i for i in indices if not positive[i]]
    rng.shuffle(pos)
    rng.shuffle(neg)
    held: list[int] = []
    main: list[int] = []
    for group in (pos, neg):
        take = max(1, round(len(group) * fraction)) if group else 0
        take = min(take, max(len(group) - 1, 0))
        held.extend(group[:take])
        main.extend(group[take:])
    return main, held


def train_tuned(
    corpus: Sequence[LabeledDoc],
    mode: ActionMode,
    alpha: float = 1.0,
    seed: int = 0,
    tune_fraction: float = 0.2,
) -> BayesModel:
    """Train a model for one mode and tune its threshold.

    Protocol: hold out a stratified slice of the corpus, train on the
    rest, tune the F1-optimal threshold on the held-out posteriors, then
    retrain on the full corpus and attach that threshold.
    """
    positive = _project(corpus, mode)
    rng = random.Random(_derive_seed(seed, mode.wire_name, "tune"))
    fit_idx, tune_idx = _stratified_split(range(len(corpus)), positive, tune_fraction, rng)
    fit_docs = [(corpus[i].doc, positive[i]) for i in fit_idx]
    tuning_model = train_mode(fit_docs, mode, alpha)
    tune_scores = [(posterior(tuning_model, corpus[i].doc), positive[i]) for i in tune_idx]
    tuned = tune_threshold(tune_scores)
    final = train_mode([(ex.doc, flag) for ex, flag in zip(corpus, positive)], mode, alpha)
    final.threshold = tuned.threshold
    return final


def _stratified_folds(
    positive: Sequence[bool], k: int, rng: random.Random
) -> list[int]:
    """Fold index per example; positives spread within one item per fold."""
    pos = [i for i, flag in enumerate(positive) if flag]
    neg = [i for i, flag in enumerate(positive) if not flag]
    rng.shuffle(pos)
    rng.shuffle(neg)
    fold_of = [0] * len(positive)
    for slot, index in enumerate(pos + neg):
        fold_of[index] = slot % k
    return fold_of


def cross_validate(
    corpus: Sequence[LabeledDoc],
    mode: ActionMode,
    k: int = 10,
    seed: int = 0,
    alpha: float = 1.0,
    tune_fraction: float = 0.2,
) -> EvalReport:
    """Stratified k-fold cross-validation for one mode.

    Each fold's model is trained on the other k-1 folds with its threshold
    tuned on an internal split of that training data, then measured on the
    held-out fold. Pooled metrics aggregate the per-fold confusion counts;
    the reported threshold is the median of the fold thresholds.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    positive = _project(corpus, mode)
    abundance = sum(positive)
    if abundance < k:
        raise ValueError(
            f"cross_validate needs >= k positives for {mode.wire_name}: "
            f"{abundance} < {k}"
        )
    rng = random.Random(_derive_seed(seed, mode.wire_name, "folds"))
    fold_of = _stratified_folds(positive, k, rng)
    folds: list[FoldResult] = []
    pooled_tp = pooled_fp = pooled_fn = 0
    for fold in range(k):
        train_set = [corpus[i] for i in range(len(corpus)) if fold_of[i] != fold]
        test_idx = [i for i in range(len(corpus)) if fold_of[i] == fold]
        model = train_tuned(train_set, mode, alpha, seed=(seed * 8191 + fold), tune_fraction=tune_fraction)
        tp = fp = fn = 0
        for i in test_idx:
            predicted = posterior(model, corpus[i].doc) >= model.threshold
            if predicted and positive[i]:
                tp += 1
            elif predicted:
                fp += 1
            elif positive[i]:
                fn += 1
        precision, recall, f1 = precision_recall_f1(tp, fp, fn)
        folds.append(
            FoldResult(
                fold=fold,
                threshold=model.threshold,
                precision=precision,
                recall=recall,
                f1=f1,
                tp=tp,
                fp=fp,
                fn=fn,
                test_size=len(test_idx),
                test_positives=sum(1 for i in test_idx if positive[i]),
            )
        )
        pooled_tp += tp
        pooled_fp += fp
        pooled_fn += fn
    precision, recall, f1 = precision_recall_f1(pooled_tp, pooled_fp, pooled_fn)
    return EvalReport(
        mode=mode,
        abundance=abundance,
        threshold=statistics.median(f.threshold for f in folds),
        precision=precision,
        recall=recall,
        f1=f1,
        tp=pooled_tp,
        fp=pooled_fp,
        fn=pooled_fn,
        folds=tuple(folds),
    )


def holdout_evaluate(
    train_corpus: Sequence[LabeledDoc],
    test_corpus: Sequence[LabeledDoc],
    mode: ActionMode,
    alpha: float = 1.0,
    seed: int = 0,
    tune_fraction: float = 0.2,
) -> EvalReport:
    """Train on one corpus, evaluate on a disjoint out-of-domain corpus.

    The threshold is tuned on a held-out slice of the training corpus. A
    test corpus with no positives is reported with recall 0 and a
    ``no-positives-in-test`` flag rather than an error.
    """
    train_ids = {ex.id for ex in train_corpus}
    overlap = train_ids.intersection(ex.id for ex in test_corpus)
    if overlap:
        raise ValueError(
            f"train/test corpora overlap on {len(overlap)} ids (e.g. {sorted(overlap)[:3]})"
        )
    model = train_tuned(train_corpus, mode, alpha, seed=seed, tune_fraction=tune_fraction)
    positive = _project(test_corpus, mode)
    tp = fp = fn = 0
    for example, truth in zip(test_corpus, positive):
        predicted = posterior(model, example.doc) >= model.threshold
        if predicted and truth:
            tp += 1
        elif predicted:
            fp += 1
        elif truth:
            fn += 1
    precision, recall, f1 = precision_recall_f1(tp, fp, fn)
    flags = () if any(positive) else ("no-positives-in-test",)
    return EvalReport(
        mode=mode,
        abundance=sum(positive),
        threshold=model.threshold,
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        fn=fn,
        flags=flags,
    )


def _fmt(value: float) -> str:
    """17-significant-digit decimal string; round-trips IEEE doubles exactly."""
    return format(value, ".17g")


def save_model(model: BayesModel, path) -> None:
    """Write a model file with float fields as exact decimal strings."""
    payload = {
        "schema": MODEL_SCHEMA,
        "mode": model.mode.wire_name,
        "alpha": _fmt(model.alpha),
        "log_prior_pos": _fmt(model.log_prior_pos),
        "log_prior_neg": _fmt(model.log_prior_neg),
        "unseen_pos": _fmt(model.unseen_pos),
        "unseen_neg": _fmt(model.unseen_neg),
        "threshold": _fmt(model.threshold),
        "vocab_size": model.vocab_size,
        "loglik": {
            phrase: [_fmt(pair[0]), _fmt(pair[1])]
            for phrase, pair in sorted(model.loglik.items())
        },
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1) + "\n",
        encoding="utf-8",
    )


def load_model(path) -> BayesModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("schema") != MODEL_SCHEMA:
        raise ValueError(
            f"unsupported model schema {payload.get('schema')!r} in {path}"
        )
    return BayesModel(
        mode=ActionMode.from_name(payload["mode"]),
        alpha=float(payload["alpha"]),
        log_prior_pos=float(payload["log_prior_pos"]),
        log_prior_neg=float(payload["log_prior_neg"]),
        loglik={
            phrase: (float(pair[0]), float(pair[1]))
            for phrase, pair in payload["loglik"].items()
        },
        unseen_pos=float(payload["unseen_pos"]),
        unseen_neg=float(payload["unseen_neg"]),
        vocab_size=int(payload["vocab_size"]),
        threshold=float(payload["threshold"]),
    )


def save_bundle(
    models: Mapping[ActionMode, BayesModel], lexicon: MweLexicon, directory
) -> Path:
    """Write the per-mode model files, the lexicon, and the bundle index."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    model_files = {}
    for mode in ALL_MODES:
        if mode not in models:
            raise ValueError(f"bundle requires a model for every mode; missing {mode}")
        name = f"model_{mode.wire_name}.json"
        save_model(models[mode], directory / name)
        model_files[mode.wire_name] = name
    lexicon.to_file(directory / "lexicon.txt")
    index = {
        "schema": BUNDLE_SCHEMA,
        "lexicon": "lexicon.txt",
        "models": model_files,
    }
    bundle_path = directory / "bundle.json"
    bundle_path.write_text(
        json.dumps(index, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return bundle_path


def load_bundle(bundle_path) -> tuple[dict[ActionMode, BayesModel], MweLexicon]:
    """Load a bundle index plus all models and the lexicon it references."""
    bundle_path = Path(bundle_path)
    if bundle_path.is_dir():
        bundle_path = bundle_path / "bundle.json"
    payload = json.loads(bundle_path.read_text(encoding="utf-8"))
    if payload.get("schema") != BUNDLE_SCHEMA:
        raise ValueError(
            f"unsupported bundle schema {payload.get('schema')!r} in {bundle_path}"
        )
    base = bundle_path.parent
    models = {
        ActionMode.from_name(name): load_model(base / filename)
        for name, filename in payload["models"].items()
    }
    lexicon = MweLexicon.from_file(base / payload["lexicon"])
    return models, lexicon
