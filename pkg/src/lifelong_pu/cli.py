"""Command line entry point: ``lifelong-pu <command> ...``.

Commands
--------
group        t-words of a target, ``word<TAB>score`` per line
accumulate   classify one past domain and append its opinion words to a KB file
mine         frequent opinion words of a KB file, ``word<TAB>support``
disentangle  split a target's t-words into ASPECT and OPINION sections
eval         acc@n of a prediction TSV against a gold TSV
synth-bench  write a synthetic benchmark (and optionally a variant report)
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from typing import Sequence

from .corpus import build_vocabulary, read_corpus
from .embeddings import EmbeddingMatrix, SkipGramConfig, load_embeddings, save_embeddings, train_skipgram
from .evaluation import (
    BENCHMARK_CONFIG,
    N_SWEEP,
    acc_at_n,
    compare_variants,
    prepare_benchmark,
    read_gold,
    read_predictions,
)
from .knowledge import DEFAULT_MIN_SUPPORT, KnowledgeBase, append_record, load_kb, mine_reliable
from .lpu import LpuConfig, Variant, disentangle_result, domain_opinion_words, run_lpu, write_iteration_log
from .pu import PuOptions, label_split, load_lexicon
from .semantics import DEFAULT_NEIGHBORS, METRICS, build_neighbor_table, closest_strings, query_target
from .synthetic import SyntheticSpec, generate_synthetic, load_spec, write_benchmark

log = logging.getLogger("lifelong_pu")


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# shared option groups


def _add_vector_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("word vectors")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="text file (one document per line) or directory of .txt files")
    src.add_argument("--embeddings", help="pre-trained vectors in the text format ('v d' header)")
    g.add_argument("--min-count", type=int, default=5)
    g.add_argument("--dim", type=int, default=SkipGramConfig.dim)
    g.add_argument("--window", type=int, default=SkipGramConfig.window)
    g.add_argument("--negative", type=int, default=SkipGramConfig.negative_samples)
    g.add_argument("--epochs", type=int, default=SkipGramConfig.epochs)
    g.add_argument("--lr", type=float, default=SkipGramConfig.learning_rate)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--save-embeddings", metavar="PATH", help="write the trained vectors here")


def _add_classifier_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("classifier")
    g.add_argument("--threshold", type=float, default=0.5)
    g.add_argument("--l2", type=float, default=PuOptions.l2)
    g.add_argument("--positive-weight", type=float, default=PuOptions.positive_weight)


def _vectors(args) -> EmbeddingMatrix:
    if getattr(args, "embeddings", None):
        return load_embeddings(args.embeddings)
    docs = read_corpus(args.corpus)
    vocab = build_vocabulary(docs, args.min_count)
    config = SkipGramConfig(dim=args.dim, window=args.window, negative_samples=args.negative,
                            epochs=args.epochs, learning_rate=args.lr, seed=args.seed)
    log.info("training %d-dim vectors for %d words", config.dim, len(vocab))
    E = train_skipgram(docs, vocab, config)
    if args.save_embeddings:
        save_embeddings(E, args.save_embeddings)
    return E


def _pu_options(args) -> PuOptions:
    return PuOptions(l2=args.l2, positive_weight=args.positive_weight)


def _check_target(E: EmbeddingMatrix, target: str) -> None:
    if target not in E:
        hints = ", ".join(closest_strings(target, E.words))
        raise CliError(f"unknown target {target!r}; closest vocabulary words: {hints}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


# ---------------------------------------------------------------------------
# commands


def cmd_group(args, out) -> None:
    E = _vectors(args)
    _check_target(E, args.target)
    for word, score in query_target(E, args.target, args.n, args.metric).t_words:
        print(f"{word}\t{score:.6f}", file=out)


def cmd_accumulate(args, out) -> None:
    if args.domain in load_kb(args.kb):
        raise CliError(f"domain {args.domain!r} is already in {args.kb}")
    E = _vectors(args)
    lexicon = load_lexicon(args.lexicon)
    config = LpuConfig(threshold=args.threshold, pu=_pu_options(args))
    words = domain_opinion_words(E, lexicon, config)
    append_record(args.kb, args.domain, words)
    print(f"{args.domain}\t{len(words)} opinion words appended to {args.kb}", file=out)


def cmd_mine(args, out) -> None:
    mined = mine_reliable(load_kb(args.kb), args.min_support, exclude=args.exclude)
    for word in sorted(mined.words, key=lambda w: (-mined.support[w], w)):
        print(f"{word}\t{mined.support[word]}", file=out)


def cmd_disentangle(args, out) -> None:
    E = _vectors(args)
    _check_target(E, args.target)
    lexicon = load_lexicon(args.lexicon)
    config = LpuConfig(
        max_iterations=args.m,
        words_per_iteration=args.l,
        neighbor_k=args.k,
        min_support=args.min_support,
        threshold=args.threshold,
        variant=Variant(args.variant),
        prediction_scope=args.prediction_scope,
        loop_rule=args.loop_rule,
        pu=_pu_options(args),
    )
    split = label_split(E.words, lexicon)
    H = build_neighbor_table(E, config.neighbor_k, args.metric)
    kb = load_kb(args.kb) if args.kb else KnowledgeBase()
    result = run_lpu(E, H, split, kb, config, domain_id=args.domain)
    t_words = query_target(E, args.target, args.n, args.metric)
    parts = disentangle_result(t_words, result, E, split.positives, config.threshold)
    for title, items in (("ASPECT", parts.aspect), ("OPINION", parts.opinion)):
        print(title, file=out)
        for word, prob in items:
            print(f"{word}\t{prob:.6f}", file=out)
    if args.log_iterations:
        write_iteration_log(result, args.log_iterations)


def cmd_eval(args, out) -> None:
    gold = read_gold(args.gold)
    preds = read_predictions(args.pred)
    if not gold:
        raise CliError(f"no gold labels in {args.gold}")
    print(",".join(["target"] + [f"acc@{n}" for n in args.n]), file=out)
    for target, labeled in gold.items():
        scores = [acc_at_n(preds.get(target, {}), labeled, n) for n in args.n]
        print(",".join([target] + [f"{s:.4f}" for s in scores]), file=out)


def cmd_synth_bench(args, out) -> None:
    spec = load_spec(args.spec) if args.spec else SyntheticSpec()
    bench = generate_synthetic(spec, args.seed)
    root = write_benchmark(bench, args.out)
    print(f"wrote {bench.n_domains} domains to {root}", file=out)
    if args.compare:
        config = dataclasses.replace(BENCHMARK_CONFIG, min_support=spec.min_support)
        prepared = prepare_benchmark(bench, config=config)
        report = compare_variants(prepared, args.compare, N_SWEEP)
        (root / "report.csv").write_text(report.to_csv(), encoding="utf-8")
        out.write(report.to_csv())


# ---------------------------------------------------------------------------
# parser


def _variants(text: str) -> list[Variant]:
    try:
        return [Variant(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lifelong-pu", description="Target-based aspect/opinion word extraction.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="nearest-neighbor t-words of a target")
    _add_vector_options(p)
    p.add_argument("--target", required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--metric", choices=METRICS, default="cosine")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("accumulate", help="add one past domain's opinion words to a knowledge base")
    _add_vector_options(p)
    p.add_argument("--domain", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--kb", required=True)
    _add_classifier_options(p)
    p.set_defaults(func=cmd_accumulate)

    p = sub.add_parser("mine", help="frequent opinion words of a knowledge base")
    p.add_argument("--kb", required=True)
    p.add_argument("--min-support", type=int, default=DEFAULT_MIN_SUPPORT)
    p.add_argument("--exclude", action="append", help="domain id to leave out (repeatable)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("disentangle", help="split t-words into aspect and opinion words")
    _add_vector_options(p)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--kb", help="knowledge base file; omitted means no past domains")
    p.add_argument("--domain", help="id of the current domain, left out when mining")
    p.add_argument("--target", required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.LPU.value)
    p.add_argument("--m", type=int, default=LpuConfig.max_iterations)
    p.add_argument("--l", type=int, default=LpuConfig.words_per_iteration)
    p.add_argument("--k", type=int, default=DEFAULT_NEIGHBORS)
    p.add_argument("--min-support", type=int, default=DEFAULT_MIN_SUPPORT)
    p.add_argument("--metric", choices=METRICS, default="cosine")
    p.add_argument("--prediction-scope", choices=("unlabeled_only", "all_words"), default="unlabeled_only")
    p.add_argument("--loop-rule", choices=("and", "or"), default="and", help=argparse.SUPPRESS)
    p.add_argument("--log-iterations", metavar="PATH", help="write per-iteration CSV here")
    _add_classifier_options(p)
    p.set_defaults(func=cmd_disentangle)

    p = sub.add_parser("eval", help="acc@n of predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--n", type=_int_list, default=N_SWEEP)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth-bench", help="write a synthetic multi-domain benchmark")
    p.add_argument("--spec", help="key = value generator parameters; defaults when omitted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--compare", type=_variants, metavar="V1,V2",
                   help="also run these variants and write report.csv")
    p.set_defaults(func=cmd_synth_bench)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args, out)
    except (CliError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
