"""Command-line entry point: simulate, select, serve, analyze, bleu.

Exit codes: 0 success, 1 runtime/data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import analytics
from .bleu import corpus_bleu
from .corpus import (
    CorpusFormatError,
    load_dictionary,
    load_parallel_corpus,
    load_source_corpus,
    tokenize,
)
from .coverage import build_frequency_table, initialize_coverage, load_snapshot
from .selection import (
    HNG,
    RANDOM,
    STRATEGY_KINDS,
    VG,
    Pool,
    Selector,
    Strategy,
    format_selection_record,
)
from .simulate import (
    COST_AXES,
    ComposedLexicon,
    OracleMissError,
    SimulationConfig,
    emit_curve,
    load_curve,
    run_manifest,
    run_simulation,
    write_manifest,
)


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return number


def _non_negative_int(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return number


def _make_strategy(kind: str, seed: int | None) -> Strategy:
    if kind == RANDOM:
        return Strategy(kind=kind, seed=seed if seed is not None else 0)
    return Strategy(kind=kind)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vocabgrowth",
        description=(
            "Coverage-driven selection of translation data to annotate next: "
            "simulation lab, selection streaming, annotation service, "
            "cost analytics, and BLEU scoring."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="replay a strategy against an oracle corpus")
    sim.add_argument("--corpus", nargs=2, metavar=("SRC", "TGT"), required=True)
    sim.add_argument("--test", nargs=2, metavar=("SRC", "TGT"), required=True)
    sim.add_argument("--strategy", choices=STRATEGY_KINDS, required=True)
    sim.add_argument("--batch", type=_positive_int, default=100)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--cost-axis", choices=COST_AXES, default="words")
    sim.add_argument("--out", required=True, help="curve CSV path")
    sim.add_argument("--dict", dest="dictionary", help="TSV lexicon joining training")
    sim.add_argument(
        "--lexicon",
        help="TSV oracle lexicon for hng trigger translations "
        "(multi-token triggers compose from unigram entries)",
    )

    sel = sub.add_parser("select", help="stream selections until a limit or stopping")
    sel.add_argument("--corpus", required=True, help="unlabeled pool, one sentence per line")
    sel.add_argument("--labeled", help="already-labeled source sentences")
    sel.add_argument("--dict", dest="dictionary", help="TSV lexicon seeding coverage")
    sel.add_argument("--strategy", choices=STRATEGY_KINDS, required=True)
    sel.add_argument("--limit", type=_non_negative_int, default=None)
    sel.add_argument("--seed", type=int, default=0)
    sel.add_argument("--out", help="selection stream path (default stdout)")

    srv = sub.add_parser("serve", help="run the annotation service")
    srv.add_argument("--corpus", required=True, help="unlabeled pool, one sentence per line")
    srv.add_argument("--labeled", help="already-labeled source sentences")
    srv.add_argument("--dict", dest="dictionary", help="TSV lexicon seeding coverage")
    srv.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("VOCABGROWTH_PORT", "8000")),
    )
    srv.add_argument(
        "--price", default=os.environ.get("VOCABGROWTH_PRICE", "0.01")
    )
    srv.add_argument(
        "--store",
        default=os.environ.get("VOCABGROWTH_STORE"),
        help="append-only record file, replayed on restart",
    )
    srv.add_argument(
        "--lease-seconds",
        type=float,
        default=float(os.environ.get("VOCABGROWTH_LEASE_SECONDS", "1800")),
    )
    srv.add_argument("--max-sentence-len", type=_positive_int, default=60)
    srv.add_argument("--host", default="127.0.0.1")

    ana = sub.add_parser("analyze", help="speed, slope, or coverage analytics")
    ana.add_argument(
        "--records",
        nargs="+",
        help="annotation record file(s); two files in speed mode adds a ratio",
    )
    ana.add_argument(
        "--curves", nargs="+", help="curve CSV(s); slopes mode wants OLD NEW"
    )
    ana.add_argument("--snapshot", help="coverage snapshot for coverage mode")
    ana.add_argument("--test", help="test-set source file for coverage mode")
    ana.add_argument("--mode", choices=("speed", "slopes", "coverage"), required=True)
    ana.add_argument("--bin-width", type=float, default=5.0)
    ana.add_argument("--out", help="report directory (default: report to stdout only)")

    bl = sub.add_parser("bleu", help="corpus BLEU of a hypothesis file vs a reference")
    bl.add_argument("--hyp", required=True)
    bl.add_argument("--ref", required=True)
    bl.add_argument("--max-n", type=_positive_int, default=4)
    bl.add_argument("--smooth", action="store_true")
    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    corpus = load_parallel_corpus(*args.corpus)
    test_set = load_parallel_corpus(*args.test)
    dictionary = load_dictionary(args.dictionary) if args.dictionary else []
    lexicon = None
    if args.lexicon:
        lexicon = ComposedLexicon(load_dictionary(args.lexicon))
    if args.strategy == HNG and lexicon is None:
        print("error: --strategy hng requires --lexicon", file=sys.stderr)
        return 1
    config = SimulationConfig(
        strategy=_make_strategy(args.strategy, args.seed),
        batch_size=args.batch,
        cost_axis=args.cost_axis,
    )
    result = run_simulation(
        config, corpus, test_set, dictionary=dictionary, trigger_lexicon=lexicon
    )
    emit_curve(result.curve, args.out)
    manifest = run_manifest(config, corpus, test_set, result)
    write_manifest(manifest, str(args.out) + ".manifest.json")
    last = result.curve.points[-1] if result.curve.points else None
    print(
        f"{args.strategy}: {result.selections} selections, "
        f"{len(result.curve)} curve points, stop={result.stop_reason}, "
        f"final={'-' if last is None else f'{last.cost} -> {last.score:.4f}'}"
    )
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    pool_sentences = load_source_corpus(args.corpus)
    labeled = load_source_corpus(args.labeled) if args.labeled else []
    dictionary = load_dictionary(args.dictionary) if args.dictionary else []
    table = build_frequency_table(pool_sentences, labeled, dictionary)
    index = initialize_coverage(table, labeled, dictionary)
    pool = Pool(pool_sentences)
    strategy = _make_strategy(args.strategy, args.seed)
    selector = Selector(strategy, pool, index)

    out_fp = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    emitted = 0
    try:
        while args.limit is None or emitted < args.limit:
            selection = selector.next_selection()
            if selection is None:
                break
            emitted += 1
            record = format_selection_record(
                emitted, strategy.kind, selection.sentence.id, selection.trigger
            )
            print(record, file=out_fp)
    finally:
        if out_fp is not sys.stdout:
            out_fp.close()
    if emitted == 0 and strategy.kind in (VG, HNG) and index.stopping_met():
        print("stopping criterion met", file=sys.stderr)
    print(f"{emitted} selections emitted", file=sys.stderr)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import AnnotationSession, create_app

    try:
        price = Decimal(args.price)
    except InvalidOperation:
        print(f"error: invalid price {args.price!r}", file=sys.stderr)
        return 1
    pool = load_source_corpus(args.corpus)
    labeled = load_source_corpus(args.labeled) if args.labeled else []
    dictionary = load_dictionary(args.dictionary) if args.dictionary else []
    session = AnnotationSession(
        pool,
        labeled,
        dictionary,
        price=price,
        lease_seconds=args.lease_seconds,
        max_sentence_len=args.max_sentence_len,
        store_path=args.store,
    )
    app = create_app(session)
    try:
        # uvicorn converts bind failures into SystemExit(1).
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        if exc.code:
            print(f"error: server failed to start on port {args.port}", file=sys.stderr)
            return 1
    finally:
        session.close()
    return 0


def _analyze_speed(args: argparse.Namespace, report: list[str]) -> int:
    if not args.records:
        print("error: --mode speed requires --records", file=sys.stderr)
        return 1
    all_stats = []
    for path in args.records:
        records = analytics.load_records(path)
        samples = analytics.speed_samples_from_records(records)
        if not samples:
            print(f"error: no usable records in {path}", file=sys.stderr)
            return 1
        stats = analytics.speed_stats(samples)
        all_stats.append((path, stats, samples))
        report.append(
            f"{path}: n={stats.sample_count} mean={stats.mean:.4f} "
            f"median={stats.median:.4f} trimmed_mean={stats.trimmed_mean:.4f} "
            f"s/word (dropped {stats.trimmed_count} slowest)"
        )
    if len(all_stats) == 2:
        ratio = all_stats[0][1].mean / all_stats[1][1].mean
        report.append(f"speed_ratio = {ratio:.4f} (first mean / second mean)")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for path, _, samples in all_stats:
            bins = analytics.histogram(samples, args.bin_width)
            name = Path(path).stem + "_histogram.csv"
            lines = ["bin_lower,bin_upper,frequency"]
            lines += [
                f"{b.lower:.2f},{b.upper:.2f},{b.frequency:.6f}" for b in bins
            ]
            (outdir / name).write_text(
                "".join(line + "\n" for line in lines), encoding="utf-8"
            )
    return 0


def _analyze_slopes(args: argparse.Namespace, report: list[str]) -> int:
    if not args.curves or len(args.curves) != 2:
        print("error: --mode slopes requires --curves OLD NEW", file=sys.stderr)
        return 1
    segments = []
    for path in args.curves:
        curve = load_curve(path)
        points = [(p.cost, p.score) for p in curve.points]
        if len(points) < 2:
            print(f"error: {path} has fewer than 2 points", file=sys.stderr)
            return 1
        segments.append(points)
    comparison = analytics.compare_trends(segments[0], segments[1])
    old_fit = analytics.fit_slope(segments[0])
    new_fit = analytics.fit_slope(segments[1])
    report.append(
        f"slope_old = {comparison.slope_old:.6e} "
        f"(rss {old_fit.residual_sum_squares:.6e}, n {old_fit.point_count})"
    )
    report.append(
        f"slope_new = {comparison.slope_new:.6e} "
        f"(rss {new_fit.residual_sum_squares:.6e}, n {new_fit.point_count})"
    )
    if comparison.ratio_is_infinite:
        report.append("ratio = inf (old segment is flat)")
    else:
        report.append(f"ratio = {comparison.ratio:.4f}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        lines = ["segment,slope,intercept,rss,points"]
        for name, fit in (("old", old_fit), ("new", new_fit)):
            lines.append(
                f"{name},{fit.slope!r},{fit.intercept!r},"
                f"{fit.residual_sum_squares!r},{fit.point_count}"
            )
        (outdir / "slopes.csv").write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8"
        )
    return 0


def _analyze_coverage(args: argparse.Namespace, report: list[str]) -> int:
    if not args.records and not args.snapshot:
        print(
            "error: --mode coverage requires --records and/or --snapshot",
            file=sys.stderr,
        )
        return 1
    if args.snapshot:
        index = load_snapshot(args.snapshot)
        stats = index.stats()
        report.append(
            f"coverage: {stats.covered_count}/{stats.total_count} "
            f"table n-grams covered ({100 * stats.fraction:.2f}%)"
        )
    if args.records:
        records = []
        for path in args.records:
            records.extend(analytics.load_records(path))
        triggers = [tuple(r["trigger"]) for r in records if r.get("trigger")]
        if not triggers:
            print("error: records carry no triggers", file=sys.stderr)
            return 1
        if not args.test:
            print(
                "error: trigger hit-rate needs --test SOURCE_FILE",
                file=sys.stderr,
            )
            return 1
        from .corpus import extract_ngrams

        test_sentences = load_source_corpus(args.test)
        test_ngrams = set()
        for sentence in test_sentences:
            test_ngrams.update(extract_ngrams(sentence))
        hits = sum(1 for t in triggers if t in test_ngrams)
        report.append(
            f"collected triggers: {len(triggers)}; in test set: {hits} "
            f"({100 * hits / len(triggers):.2f}%)"
        )
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    report: list[str] = []
    if args.mode == "speed":
        status = _analyze_speed(args, report)
    elif args.mode == "slopes":
        status = _analyze_slopes(args, report)
    else:
        status = _analyze_coverage(args, report)
    if status != 0:
        return status
    text = "".join(line + "\n" for line in report)
    sys.stdout.write(text)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.txt").write_text(text, encoding="utf-8")
    return 0


def cmd_bleu(args: argparse.Namespace) -> int:
    hyp_lines = Path(args.hyp).read_text(encoding="utf-8").splitlines()
    ref_lines = Path(args.ref).read_text(encoding="utf-8").splitlines()
    if len(hyp_lines) != len(ref_lines):
        print(
            f"error: line count mismatch: {args.hyp} has {len(hyp_lines)}, "
            f"{args.ref} has {len(ref_lines)}",
            file=sys.stderr,
        )
        return 1
    if not hyp_lines:
        print("error: empty input", file=sys.stderr)
        return 1
    hypotheses = [tokenize(line) for line in hyp_lines]
    references = [tokenize(line) for line in ref_lines]
    result = corpus_bleu(hypotheses, references, max_n=args.max_n, smooth=args.smooth)
    print(f"{result.score:.4f}")
    for n, (m, t) in enumerate(
        zip(result.match_counts, result.total_counts), start=1
    ):
        print(f"p{n} = {m}/{t}")
    print(f"bp = {result.brevity_penalty:.4f}")
    print(f"hyp_len = {result.hypothesis_length} ref_len = {result.reference_length}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "select": cmd_select,
        "serve": cmd_serve,
        "analyze": cmd_analyze,
        "bleu": cmd_bleu,
    }
    try:
        return handlers[args.command](args)
    except (
        CorpusFormatError,
        OracleMissError,
        FileNotFoundError,
        InvalidOperation,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
