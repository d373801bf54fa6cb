"""Command-line interface.

``layerstack run`` executes the full pipeline into an output directory;
``entropy``, ``rank``, ``aggregate``, ``belief``, and ``scatter`` expose the
individual layers. Exit codes: 0 success, 1 fatal error, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .belief import Frame, MassFunction, belief, combine, make_mass, plausibility, vacuous_mass
from .corpus import (
    DEFAULT_CONFIG,
    TokenizerConfig,
    frequency_scatter,
    ingest_corpus,
    term_frequencies,
    tokenize,
)
from .infotheory import TokenDistribution, bitstream_entropy, hartley_entropy, shannon_entropy
from .intelligence import iterate_aggregation
from .knowledge import CorrelationResult, rank_documents
from .pipeline import (
    PipelineError,
    RunConfig,
    emit_plot_data,
    emit_tables,
    run_pipeline,
    write_report,
)

TABLE_HEADER = "title\tcorrelation\tp_value"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _tokenizer_config(stopwords: str | None) -> TokenizerConfig:
    if stopwords is None:
        return DEFAULT_CONFIG
    return TokenizerConfig.from_stop_words_file(stopwords)


def _print_table(results: list[CorrelationResult], corpus) -> None:
    print(TABLE_HEADER)
    for res in results:
        title = corpus.get(res.doc_id).title
        print(f"{title}\t{res.r:.3f}\t{res.p_value:.2e}")


def _cmd_run(args: argparse.Namespace) -> int:
    config = RunConfig(
        source=Path(args.corpus),
        out_dir=Path(args.out),
        stop_words_path=None if args.stopwords is None else Path(args.stopwords),
        k=args.k,
        rounds=args.rounds,
        per_cluster=args.per_cluster,
        top_k=args.top,
        seed=args.seed,
        reservoir_strength=args.reservoir_strength,
        force_bit_layer=args.force_bit_layer,
    )
    report = run_pipeline(config)
    written = [write_report(report)]
    written += emit_tables(report, "tsv")
    written += emit_tables(report, "json")
    written += emit_plot_data(report)
    for message in report.warnings:
        print(f"warning: {message}", file=sys.stderr)
    for path in written:
        print(path)
    return 0


def _cmd_entropy(args: argparse.Namespace) -> int:
    path = Path(args.file)
    data = path.read_bytes()
    text = data.decode("utf-8")
    counts = term_frequencies(tokenize(text, _tokenizer_config(args.stopwords)))
    total = sum(counts.values())
    payload = {
        "byte_count": len(data),
        "bitstream_bits_per_byte": bitstream_entropy(data),
        "token_count": total,
        "distinct_terms": len(counts),
        "token_bits": shannon_entropy(TokenDistribution.from_counts(counts))
        if total
        else None,
        "hartley_term_bits": hartley_entropy(len(counts)) if counts else None,
    }
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    corpus = ingest_corpus(args.corpus, _tokenizer_config(args.stopwords))
    results = rank_documents(corpus, top_k=args.top)
    _print_table(results, corpus)
    return 0


def _cmd_aggregate(args: argparse.Namespace) -> int:
    corpus = ingest_corpus(args.corpus, _tokenizer_config(args.stopwords))
    results = iterate_aggregation(
        corpus,
        k=args.k,
        rounds=args.rounds,
        per_cluster=args.per_cluster,
        seed=args.seed,
    )
    _print_table(results[: args.top], corpus)
    return 0


def _load_mass(frame: Frame, path: str) -> MassFunction:
    """Read a mass file: a JSON object of comma-joined element names → mass."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError(f"mass file {path} must hold a JSON object")
    assignments = []
    for names, mass in raw.items():
        subset = tuple(part.strip() for part in names.split(",") if part.strip())
        assignments.append((subset, float(mass)))
    return make_mass(frame, assignments)


def _cmd_belief(args: argparse.Namespace) -> int:
    elements = tuple(part.strip() for part in args.frame.split(",") if part.strip())
    frame = Frame(elements=elements)
    result = vacuous_mass(frame) if args.prior is None else _load_mass(frame, args.prior)
    if args.evidence is not None:
        result = combine(result, _load_mass(frame, args.evidence))
    payload = {
        name: {
            "belief": belief(result, (name,)),
            "plausibility": plausibility(result, (name,)),
        }
        for name in elements
    }
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    return 0


def _cmd_scatter(args: argparse.Namespace) -> int:
    corpus = ingest_corpus(args.corpus, _tokenizer_config(args.stopwords))
    if len(corpus) < 2:
        raise ValueError("scatter needs at least 2 documents for a leave-one-out reference")
    if args.doc is not None:
        try:
            docs = [corpus.get(args.doc)]
        except KeyError:
            raise ValueError(f"document {args.doc!r} not in corpus") from None
    else:
        docs = list(corpus)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["doc_id", "term", "doc_proportion", "reference_proportion", "deviation"])
    for doc in docs:
        if doc.total_tokens == 0:
            continue
        reference = corpus.leave_one_out_counts(doc.id)
        if not reference:
            continue
        for point in frequency_scatter(doc, reference):
            writer.writerow(
                [
                    doc.id,
                    point.term,
                    point.doc_proportion,
                    point.reference_proportion,
                    point.deviation,
                ]
            )
    return 0


def _add_corpus_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("corpus", help="corpus directory of .txt files or JSONL manifest")
    parser.add_argument("--stopwords", metavar="FILE", help="stop-word override, one term per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerstack",
        description="Staged corpus analysis: entropy, ranking, aggregation, belief.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full layered pipeline")
    _add_corpus_argument(run)
    run.add_argument("--k", type=_positive_int, default=3, help="cluster count (default 3)")
    run.add_argument("--rounds", type=_nonnegative_int, default=1, help="aggregation rounds (default 1)")
    run.add_argument("--per-cluster", type=_positive_int, default=5, help="representatives per cluster (default 5)")
    run.add_argument("--top", type=_positive_int, default=5, help="rows per ranking table (default 5)")
    run.add_argument("--seed", type=int, default=42, help="clustering seed (default 42)")
    run.add_argument("--reservoir-strength", type=_positive_float, default=1.0, help="entropic gain scale (default 1.0)")
    run.add_argument("--out", metavar="DIR", default="layerstack-out", help="output directory (default layerstack-out)")
    run.add_argument("--force-bit-layer", action="store_true", help="compute byte-stream entropies even for text input")
    run.set_defaults(handler=_cmd_run)

    entropy = sub.add_parser("entropy", help="bitstream and token entropies of one file")
    entropy.add_argument("file", help="UTF-8 text file")
    entropy.add_argument("--stopwords", metavar="FILE", help="stop-word override, one term per line")
    entropy.set_defaults(handler=_cmd_entropy)

    rank = sub.add_parser("rank", help="rank documents by leave-one-out correlation")
    _add_corpus_argument(rank)
    rank.add_argument("--top", type=_positive_int, default=5, help="rows to emit (default 5)")
    rank.set_defaults(handler=_cmd_rank)

    aggregate = sub.add_parser("aggregate", help="cluster, reselect, and re-rank")
    _add_corpus_argument(aggregate)
    aggregate.add_argument("--k", type=_positive_int, default=3, help="cluster count (default 3)")
    aggregate.add_argument("--rounds", type=_nonnegative_int, default=1, help="aggregation rounds (default 1)")
    aggregate.add_argument("--per-cluster", type=_positive_int, default=5, help="representatives per cluster (default 5)")
    aggregate.add_argument("--seed", type=int, default=42, help="clustering seed (default 42)")
    aggregate.add_argument("--top", type=_positive_int, default=5, help="rows to emit (default 5)")
    aggregate.set_defaults(handler=_cmd_aggregate)

    belief_cmd = sub.add_parser("belief", help="combine mass functions and report Bel/Pl")
    belief_cmd.add_argument("--frame", required=True, help="comma-joined element names")
    belief_cmd.add_argument("--prior", metavar="FILE", help="prior mass file (JSON names->mass); default vacuous")
    belief_cmd.add_argument("--evidence", metavar="FILE", help="evidence mass file to combine with the prior")
    belief_cmd.set_defaults(handler=_cmd_belief)

    scatter = sub.add_parser("scatter", help="document-versus-rest term proportion CSV")
    _add_corpus_argument(scatter)
    scatter.add_argument("--doc", metavar="ID", help="restrict to one document id")
    scatter.set_defaults(handler=_cmd_scatter)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (PipelineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
