"""Command-line surface binding the pipeline stages together.

Each command is a pure function of its input files and flags: lexicon
induction, training, evaluation, batch classification, and the diagnostic
exports (phrase shifts, geo clusters, presence series, county table),
plus a read-only service over the exported artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import analytics, artifacts, classify, explain, geo, segment
from .ingest import (
    ClassifiedTweet,
    Tweet,
    classified_to_record,
    format_instant,
    normalize_text,
    parse_instant,
    parse_stream,
    protest_filter,
    read_classified,
    read_tweets,
    read_windows,
)
from .modes import ActionMode, ALL_MODES

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def _window_start(ts: datetime, minutes: int) -> datetime:
    seconds = int((ts - _EPOCH).total_seconds())
    width = minutes * 60
    return _EPOCH + timedelta(seconds=(seconds // width) * width)


def _labeled_corpus(path, lexicon: segment.MweLexicon) -> tuple[list[classify.LabeledDoc], Counter]:
    """Segment a coded tweet file into labeled documents.

    Records without a labels array are treated as coded negative for every
    mode, matching how uncoded tweets enter binary training.
    """
    tweets, rejected = read_tweets(path)
    corpus = [
        classify.LabeledDoc(
            id=tweet.id,
            doc=segment.segment_text(normalize_text(tweet.text), lexicon),
            labels=tweet.labels if tweet.labels is not None else frozenset(),
        )
        for tweet in tweets
    ]
    return corpus, rejected


def _emit_summary(**fields) -> None:
    print(json.dumps(fields, sort_keys=True), file=sys.stderr)


def _parse_mode_flag(value: str) -> list[ActionMode]:
    if value == "all-modes":
        return list(ALL_MODES)
    return [ActionMode.from_name(value)]


def _resolve_span(
    records: Sequence[ClassifiedTweet],
    from_arg: Optional[str],
    to_arg: Optional[str],
) -> tuple[datetime, datetime]:
    if from_arg and to_arg:
        return parse_instant(from_arg), parse_instant(to_arg)
    if not records:
        raise ValueError("empty input and no explicit --from/--to span")
    timestamps = [r.timestamp for r in records]
    start = parse_instant(from_arg) if from_arg else min(timestamps)
    end = parse_instant(to_arg) if to_arg else max(timestamps) + timedelta(seconds=1)
    return start, end


def cmd_lexicon(args) -> int:
    tweets, rejected = read_tweets(args.corpus)
    token_lists = (segment.tokenize(normalize_text(t.text)) for t in tweets)
    lexicon = segment.induce_lexicon(
        token_lists,
        min_count=args.min_count,
        min_score=args.min_score,
        max_len=args.max_len,
    )
    lexicon.to_file(args.out)
    _emit_summary(
        command="lexicon",
        tweets=len(tweets),
        rejected=dict(rejected),
        entries=len(lexicon),
    )
    return 0


def cmd_train(args) -> int:
    lexicon = segment.MweLexicon.from_file(args.lexicon)
    corpus, rejected = _labeled_corpus(args.corpus, lexicon)
    models = {
        mode: classify.train_tuned(corpus, mode, alpha=args.alpha, seed=args.seed)
        for mode in ALL_MODES
    }
    bundle_path = classify.save_bundle(models, lexicon, args.out)
    _emit_summary(
        command="train",
        documents=len(corpus),
        rejected=dict(rejected),
        bundle=str(bundle_path),
    )
    return 0


def _report_row(report: classify.EvalReport) -> dict:
    return {
        "mode": report.mode.wire_name,
        "abundance": report.abundance,
        "threshold": report.threshold,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "tp": report.tp,
        "fp": report.fp,
        "fn": report.fn,
        "flags": list(report.flags),
    }


def cmd_eval(args) -> int:
    lexicon = segment.MweLexicon.from_file(args.lexicon)
    corpus, _ = _labeled_corpus(args.corpus, lexicon)
    reports: list[classify.EvalReport] = []
    folds: dict[str, list[dict]] = {}
    for mode in ALL_MODES:
        if args.holdout:
            test_corpus, _ = _labeled_corpus(args.holdout, lexicon)
            report = classify.holdout_evaluate(
                corpus, test_corpus, mode, alpha=args.alpha, seed=args.seed
            )
        else:
            report = classify.cross_validate(
                corpus, mode, k=args.k, seed=args.seed, alpha=args.alpha
            )
        reports.append(report)
        folds[mode.wire_name] = [
            {
                "fold": f.fold,
                "threshold": f.threshold,
                "precision": f.precision,
                "recall": f.recall,
                "f1": f.f1,
                "tp": f.tp,
                "fp": f.fp,
                "fn": f.fn,
                "test_size": f.test_size,
                "test_positives": f.test_positives,
            }
            for f in report.folds
        ]
    columns = ["mode", "abundance", "threshold", "precision", "recall", "f1"]
    print("\t".join(columns))
    for report in reports:
        row = _report_row(report)
        print(
            "\t".join(
                f"{row[c]:.2f}" if isinstance(row[c], float) else str(row[c])
                for c in columns
            )
        )
    if args.out:
        payload = artifacts.envelope(
            artifacts.EVAL_SCHEMA,
            config={
                "alpha": args.alpha,
                "k": None if args.holdout else args.k,
                "seed": args.seed,
                "protocol": "holdout" if args.holdout else "cross-validation",
            },
            inputs={
                "corpus": artifacts.input_ref(args.corpus),
                "lexicon": artifacts.input_ref(args.lexicon),
                **(
                    {"holdout": artifacts.input_ref(args.holdout)}
                    if args.holdout
                    else {}
                ),
            },
        )
        payload["rows"] = [_report_row(r) for r in reports]
        payload["folds"] = folds
        artifacts.write_export(args.out, payload)
    return 0


def cmd_classify(args) -> int:
    models, lexicon = classify.load_bundle(args.bundle)
    for name, cutoff in (args.thresholds or {}).items():
        mode = ActionMode.from_name(name)
        if not 0.0 <= float(cutoff) <= 1.0:
            raise ValueError(f"threshold override for {name} outside [0, 1]: {cutoff}")
        models[mode].threshold = float(cutoff)
    windows = read_windows(args.windows) if args.windows else None
    rejected: Counter = Counter()
    parsed = 0
    emitted = 0

    def valid_tweets():
        nonlocal parsed
        with open(args.corpus, encoding="utf-8") as handle:
            for item in parse_stream(handle):
                if isinstance(item, Tweet):
                    parsed += 1
                    yield item
                else:
                    rejected[item.reason] += 1

    if windows is not None:
        stream = protest_filter(valid_tweets(), windows)
    else:
        stream = ((tweet, None) for tweet in valid_tweets())

    mode_models = [(mode, models[mode]) for mode in ALL_MODES]
    with open(args.out, "w", encoding="utf-8") as out:
        for tweet, matched in stream:
            doc = segment.segment_text(normalize_text(tweet.text), lexicon)
            posteriors = {}
            positives = []
            for mode, model in mode_models:
                p = classify.posterior(model, doc)
                posteriors[mode] = p
                if p >= model.threshold:
                    positives.append(mode)
            record = classified_to_record(
                ClassifiedTweet(
                    id=tweet.id,
                    timestamp=tweet.timestamp,
                    lat=tweet.lat,
                    lon=tweet.lon,
                    text=tweet.text,
                    posteriors=posteriors,
                    positives=frozenset(positives),
                )
            )
            if tweet.labels is not None:
                record["labels"] = sorted(m.wire_name for m in tweet.labels)
            if matched is not None:
                record["windows"] = sorted(matched)
            out.write(artifacts.canonical_dumps(record) + "\n")
            emitted += 1
    _emit_summary(
        command="classify", parsed=parsed, emitted=emitted, rejected=dict(rejected)
    )
    return 0


def cmd_explain(args) -> int:
    models, lexicon = classify.load_bundle(args.bundle)
    records = read_classified(args.corpus)
    requested = _parse_mode_flag(args.mode)
    explicit_window = bool(args.window_from and args.window_to)
    if explicit_window:
        spans = [(parse_instant(args.window_from), parse_instant(args.window_to))]
    else:
        starts = sorted(
            {_window_start(r.timestamp, args.window_minutes) for r in records}
        )
        width = timedelta(minutes=args.window_minutes)
        spans = [(start, start + width) for start in starts]
    shifts = []
    for mode in requested:
        model = models[mode]
        for start, end in spans:
            selected = [
                r
                for r in records
                if start <= r.timestamp < end
                and (args.selection == "all" or mode in r.positives)
            ]
            if not selected:
                if explicit_window:
                    raise ValueError(
                        f"empty selection for {mode.wire_name} in "
                        f"[{format_instant(start)}, {format_instant(end)})"
                    )
                continue
            docs = [
                segment.segment_text(normalize_text(r.text), lexicon) for r in selected
            ]
            shift = explain.shift_aggregate(model, docs)
            shifts.append(
                explain.shift_to_export(
                    shift,
                    top_k=args.top,
                    window={"start": format_instant(start), "end": format_instant(end)},
                )
            )
    payload = artifacts.envelope(
        artifacts.SHIFTS_SCHEMA,
        config={
            "mode": args.mode,
            "selection": args.selection,
            "top": args.top,
            "window_minutes": None if explicit_window else args.window_minutes,
        },
        inputs={
            "classified": artifacts.input_ref(args.corpus),
            "bundle": artifacts.input_ref(
                Path(args.bundle) / "bundle.json"
                if Path(args.bundle).is_dir()
                else args.bundle
            ),
        },
    )
    payload["shifts"] = shifts
    artifacts.write_export(args.out, payload)
    _emit_summary(command="explain", shifts=len(shifts))
    return 0


def cmd_cluster(args) -> int:
    records = read_classified(args.corpus)
    by_window: dict[datetime, list[ClassifiedTweet]] = {}
    for record in records:
        by_window.setdefault(
            _window_start(record.timestamp, args.window_minutes), []
        ).append(record)
    width = timedelta(minutes=args.window_minutes)
    windows = []
    for start in sorted(by_window):
        members = by_window[start]
        clusters = geo.cluster_window(members, eps_m=args.eps_m, min_pts=args.min_pts)
        summaries = [
            geo.summarize_positives(cluster, ALL_MODES) for cluster in clusters
        ]
        clustered = sum(len(cluster) for cluster in clusters)
        windows.append(
            {
                "start": format_instant(start),
                "end": format_instant(start + width),
                "tweet_count": len(members),
                "noise_count": len(members) - clustered,
                "clusters": [
                    {
                        "id": index,
                        "centroid": {
                            "lat": summary.centroid.lat,
                            "lon": summary.centroid.lon,
                        },
                        "radius_m": summary.radius_m,
                        "count": summary.count,
                        "positive_fraction": {
                            mode.wire_name: fraction
                            for mode, fraction in summary.positive_fraction.items()
                        },
                        "member_ids": list(summary.member_ids),
                    }
                    for index, summary in enumerate(summaries)
                ],
            }
        )
    payload = artifacts.envelope(
        artifacts.CLUSTERS_SCHEMA,
        config={
            "eps_m": args.eps_m,
            "min_pts": args.min_pts,
            "window_minutes": args.window_minutes,
        },
        inputs={"classified": artifacts.input_ref(args.corpus)},
    )
    payload["windows"] = windows
    artifacts.write_export(args.out, payload)
    _emit_summary(command="cluster", windows=len(windows))
    return 0


def cmd_series(args) -> int:
    records = read_classified(args.corpus)
    span = _resolve_span(records, args.span_from, args.span_to)
    bins = analytics.hourly_presence(records, ALL_MODES, span)
    payload = artifacts.envelope(
        artifacts.SERIES_SCHEMA,
        config={"from": format_instant(span[0]), "to": format_instant(span[1])},
        inputs={"classified": artifacts.input_ref(args.corpus)},
    )
    payload["bins"] = [
        {
            "start": format_instant(bin.start),
            "tweet_count": bin.tweet_count,
            "presence": {m.wire_name: v for m, v in bin.presence.items()},
        }
        for bin in bins
    ]
    artifacts.write_export(args.out, payload)
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8") as handle:
            handle.write("start\tmode\tpresence\ttweet_count\n")
            for bin in bins:
                for mode in ALL_MODES:
                    handle.write(
                        f"{format_instant(bin.start)}\t{mode.wire_name}\t"
                        f"{bin.presence[mode]!r}\t{bin.tweet_count}\n"
                    )
    _emit_summary(command="series", bins=len(bins))
    return 0


def cmd_counties(args) -> int:
    records = read_classified(args.corpus)
    counties = analytics.load_boundaries(args.boundaries)
    span = _resolve_span(records, args.span_from, args.span_to)
    stats, unassigned = analytics.county_activity(records, counties, span)

    def stat_payload(stat: analytics.CountyStat) -> dict:
        return {
            "county_id": stat.county_id,
            "tweet_count": stat.tweet_count,
            "political_pct": stat.political_pct,
            "positives": {m.wire_name: c for m, c in stat.positives.items()},
        }

    payload = artifacts.envelope(
        artifacts.COUNTIES_SCHEMA,
        config={"from": format_instant(span[0]), "to": format_instant(span[1])},
        inputs={
            "classified": artifacts.input_ref(args.corpus),
            "boundaries": artifacts.input_ref(args.boundaries),
        },
    )
    payload["counties"] = [stat_payload(stat) for stat in stats]
    payload["unassigned"] = stat_payload(unassigned)
    artifacts.write_export(args.out, payload)
    if args.tsv:
        mode_columns = [m.wire_name for m in ALL_MODES]
        with open(args.tsv, "w", encoding="utf-8") as handle:
            handle.write(
                "county_id\ttweet_count\tpolitical_pct\t"
                + "\t".join(f"pos_{name}" for name in mode_columns)
                + "\n"
            )
            for stat in [*stats, unassigned]:
                pct = "" if stat.political_pct is None else repr(stat.political_pct)
                positives = "\t".join(
                    str(stat.positives[m]) for m in ALL_MODES
                )
                handle.write(
                    f"{stat.county_id}\t{stat.tweet_count}\t{pct}\t{positives}\n"
                )
    _emit_summary(command="counties", counties=len(stats))
    return 0


def cmd_serve(args) -> int:
    from .service import run_server

    run_server(args.artifacts, args.bind, ui_dir=args.ui)
    return 0


# Subcommand parsers, kept for config-key validation in main().
_SUBPARSERS: dict[str, argparse.ArgumentParser] = {}


def _add_command(sub, name: str, **kwargs) -> argparse.ArgumentParser:
    command = sub.add_parser(name, **kwargs)
    command.add_argument(
        "--config",
        help="JSON file of parameter defaults; explicit flags win",
    )
    _SUBPARSERS[name] = command
    return command


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> None:
    """Fill parameters from the --config file without beating explicit flags."""
    if not getattr(args, "config", None):
        return
    overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(overrides, dict):
        raise ValueError("--config must contain a JSON object")
    command = _SUBPARSERS[args.command]
    dest_by_option: dict[str, str] = {}
    valid_dests = set()
    for action in command._actions:  # noqa: SLF001 - argparse introspection
        if action.option_strings:
            valid_dests.add(action.dest)
            for option in action.option_strings:
                dest_by_option[option] = action.dest
    explicit = {
        dest_by_option[token.split("=", 1)[0]]
        for token in argv
        if token.startswith("--") and token.split("=", 1)[0] in dest_by_option
    }
    for key, value in overrides.items():
        if key in ("config", "help"):
            raise ValueError(f"config key {key!r} is not overridable")
        if key not in valid_dests:
            raise ValueError(
                f"config key {key!r} is not a parameter of {args.command!r}"
            )
        if key not in explicit:
            setattr(args, key, value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actionscope",
        description="Social-action event detection over geo-tagged short texts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lexicon = _add_command(sub, "lexicon", help="induce a multiword-expression lexicon")
    lexicon.add_argument("corpus", help="tweet NDJSON file")
    lexicon.add_argument("--min-count", type=int, default=25)
    lexicon.add_argument("--min-score", type=float, default=1.0)
    lexicon.add_argument("--max-len", type=int, default=4)
    lexicon.add_argument("--out", required=True)
    lexicon.set_defaults(func=cmd_lexicon)

    train = _add_command(sub, "train", help="train the nine mode classifiers")
    train.add_argument("corpus", help="coded tweet NDJSON file")
    train.add_argument("--lexicon", required=True)
    train.add_argument("--alpha", type=float, default=1.0)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--out", required=True, help="bundle output directory")
    train.set_defaults(func=cmd_train)

    evaluate = _add_command(sub, "eval", help="cross-validate or holdout-evaluate")
    evaluate.add_argument("corpus", help="coded tweet NDJSON file")
    evaluate.add_argument("--lexicon", required=True)
    evaluate.add_argument("--holdout", help="coded test NDJSON for out-of-domain eval")
    evaluate.add_argument("--k", type=int, default=10)
    evaluate.add_argument("--alpha", type=float, default=1.0)
    evaluate.add_argument("--seed", type=int, default=0)
    evaluate.add_argument("--out")
    evaluate.set_defaults(func=cmd_eval)

    classify_cmd = _add_command(sub, "classify", help="batch-classify a tweet stream")
    classify_cmd.add_argument("corpus", help="tweet NDJSON file")
    classify_cmd.add_argument("--bundle", required=True)
    classify_cmd.add_argument(
        "--windows", help="event-window NDJSON; filters tweets before classification"
    )
    classify_cmd.add_argument(
        "--thresholds",
        type=json.loads,
        help='JSON mode->cutoff overrides, e.g. \'{"all": 0.3}\'',
    )
    classify_cmd.add_argument("--out", required=True)
    classify_cmd.set_defaults(func=cmd_classify)

    explain_cmd = _add_command(sub, "explain", help="export phrase shifts")
    explain_cmd.add_argument("corpus", help="classified NDJSON file")
    explain_cmd.add_argument("--bundle", required=True)
    explain_cmd.add_argument(
        "--mode", required=True, help="mode wire name, or all-modes"
    )
    explain_cmd.add_argument(
        "--selection",
        choices=["positive", "all"],
        default="positive",
        help="use positively classified tweets (default) or every tweet",
    )
    explain_cmd.add_argument("--from", dest="window_from")
    explain_cmd.add_argument("--to", dest="window_to")
    explain_cmd.add_argument("--window-minutes", type=int, default=60)
    explain_cmd.add_argument("--top", type=int, default=30)
    explain_cmd.add_argument("--out", required=True)
    explain_cmd.set_defaults(func=cmd_explain)

    cluster = _add_command(sub, "cluster", help="export per-window geo clusters")
    cluster.add_argument("corpus", help="classified NDJSON file")
    cluster.add_argument("--eps-m", type=float, default=150.0)
    cluster.add_argument("--min-pts", type=int, default=3)
    cluster.add_argument("--window-minutes", type=int, default=60)
    cluster.add_argument("--out", required=True)
    cluster.set_defaults(func=cmd_cluster)

    series = _add_command(sub, "series", help="export the hourly presence series")
    series.add_argument("corpus", help="classified NDJSON file")
    series.add_argument("--from", dest="span_from")
    series.add_argument("--to", dest="span_to")
    series.add_argument("--out", required=True)
    series.add_argument("--tsv")
    series.set_defaults(func=cmd_series)

    counties = _add_command(sub, "counties", help="export the county activity table")
    counties.add_argument("corpus", help="classified NDJSON file")
    counties.add_argument("--boundaries", required=True, help="GeoJSON county polygons")
    counties.add_argument("--from", dest="span_from")
    counties.add_argument("--to", dest="span_to")
    counties.add_argument("--out", required=True)
    counties.add_argument("--tsv")
    counties.set_defaults(func=cmd_counties)

    serve = _add_command(sub, "serve", help="read-only service over exported artifacts")
    serve.add_argument("artifacts", help="directory with exported *.json artifacts")
    serve.add_argument("--bind", default="127.0.0.1:8787")
    serve.add_argument("--ui", help="static directory for the browser explorer")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary emits typed errors
        print(
            json.dumps(
                {"error": {"type": type(exc).__name__, "message": str(exc)}},
                sort_keys=True,
            ),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
