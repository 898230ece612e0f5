"""Command-line front door: one subcommand per pipeline stage.

Exit codes: 0 on success, 1 when an operation fails cleanly (bad
data, impossible request), 2 for usage errors. Flag values beat
config-file values; config-file values beat built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classifier import load_bundle, predict, save_bundle, train_all
from .config import PipelineConfig, load_config, override_config
from .corpus import load_corpus, save_corpus
from .curation import (
    Verdict,
    append_verdict_log,
    apply_verdicts,
    find_outliers,
    outlier_csv,
)
from .errors import CurationError, TextcatError
from .evaluation import (
    ablate,
    ablation_csv,
    evaluate,
    metrics_csv,
    size_curve,
    size_curve_csv,
    trend,
    trend_csv,
)
from .textpipe import (
    PhraseList,
    build_lexicon,
    default_stoplist,
    load_phrases,
    load_stoplist,
    save_lexicon,
    suggest_phrases,
)


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline settings")
    group.add_argument("--config", help="TOML settings file")
    group.add_argument("--df-threshold", type=int, dest="df_threshold")
    group.add_argument("--weighting", choices=["tf", "tfidf"])
    group.add_argument("--C", type=float, dest="C")
    group.add_argument("--clean-C", type=float, dest="clean_C")
    group.add_argument("--min-category-size", type=int, dest="min_category_size")
    group.add_argument("--validation-fraction", type=float, dest="validation_fraction")
    group.add_argument("--solver-tol", type=float, dest="solver_tol")
    group.add_argument("--seed", type=int)
    group.add_argument("--backend", choices=["numpy", "numba"])
    group.add_argument("--bucket", choices=["year", "month"])


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    base = load_config(args.config) if args.config else PipelineConfig()
    return override_config(
        base,
        df_threshold=getattr(args, "df_threshold", None),
        weighting=getattr(args, "weighting", None),
        C=getattr(args, "C", None),
        clean_C=getattr(args, "clean_C", None),
        min_category_size=getattr(args, "min_category_size", None),
        validation_fraction=getattr(args, "validation_fraction", None),
        solver_tol=getattr(args, "solver_tol", None),
        seed=getattr(args, "seed", None),
        backend=getattr(args, "backend", None),
        bucket=getattr(args, "bucket", None),
        corpus=getattr(args, "corpus", None),
        stopwords=getattr(args, "stopwords", None),
        phrases=getattr(args, "phrases", None),
        bundle=getattr(args, "model", None) or getattr(args, "out_bundle", None),
    )


def _require(value: str | None, what: str) -> str:
    if not value:
        raise TextcatError(f"{what} is required (flag or config file)")
    return value


def _load_text_resources(config: PipelineConfig):
    stoplist = load_stoplist(config.stopwords) if config.stopwords else default_stoplist()
    phrases = load_phrases(config.phrases) if config.phrases else PhraseList()
    return stoplist, phrases


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _read_verdicts(path: str) -> list[Verdict]:
    verdicts = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CurationError(f"{path}:{lineno}: bad verdict line: {exc}") from exc
            if not isinstance(row, dict) or "doc_id" not in row or "action" not in row:
                raise CurationError(f"{path}:{lineno}: need doc_id and action")
            verdicts.append(
                Verdict(
                    doc_id=str(row["doc_id"]),
                    action=str(row["action"]),
                    note=str(row.get("note", "")),
                )
            )
    return verdicts


def cmd_lexicon(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus = load_corpus(_require(config.corpus, "--corpus"))
    stoplist, phrases = _load_text_resources(config)
    lexicon = build_lexicon(corpus, phrases, stoplist, config.df_threshold)
    if args.out:
        save_lexicon(lexicon, args.out)
    print(f"terms {len(lexicon)} docs {lexicon.n_docs} df_threshold {lexicon.df_threshold}")
    if args.suggest_phrases:
        for (a, b), count in suggest_phrases(corpus, stoplist, k=args.suggest_phrases):
            print(f"{a} {b} {count}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus = load_corpus(_require(config.corpus, "--corpus"))
    stoplist, phrases = _load_text_resources(config)
    categories = args.categories.split(",") if args.categories else None
    bundle = train_all(corpus, config, stoplist=stoplist, phrases=phrases, categories=categories)
    save_bundle(bundle, _require(config.bundle, "--out"))
    for name, model in bundle.models.items():
        print(
            f"trained {name} positives {model.n_positives}"
            f" support {model.n_support}"
            f" converged {'yes' if model.converged else 'no'}"
            f" calibrated {'yes' if model.calibration else 'no'}"
        )
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.model)
    corpus = load_corpus(args.input)
    lines = []
    for doc in corpus:
        prediction = predict(bundle, doc)
        lines.append(
            json.dumps(
                {
                    "id": doc.id,
                    "zero_vector": prediction.zero_vector,
                    "results": [
                        {
                            "category": s.category,
                            "f": s.score,
                            "p": s.probability,
                            "label": s.positive,
                        }
                        for s in prediction.scores
                    ],
                },
                sort_keys=True,
            )
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.model)
    corpus = load_corpus(args.corpus)
    if args.curve:
        text = size_curve_csv(size_curve(bundle, corpus))
    else:
        text = metrics_csv(evaluate(bundle, corpus))
    _emit(text, args.out)
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    train = load_corpus(args.train)
    test = load_corpus(args.test)
    stoplist, phrases = _load_text_resources(config)
    rows = ablate(
        train,
        test,
        config,
        weightings=tuple(args.weightings.split(",")),
        df_thresholds=tuple(int(v) for v in args.df_thresholds.split(",")),
        Cs=tuple(float(v) for v in args.C_grid.split(",")),
        stoplist=stoplist,
        phrases=phrases,
    )
    _emit(ablation_csv(rows), args.out)
    return 0


def cmd_trend(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    bundle = load_bundle(args.model)
    corpus = load_corpus(_require(config.corpus, "--corpus"))
    report = trend(bundle, corpus, args.category, bucket=config.bucket)
    _emit(trend_csv(report), args.out)
    return 0


def cmd_outliers(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus = load_corpus(_require(config.corpus, "--corpus"))
    stoplist, phrases = _load_text_resources(config)
    report = find_outliers(
        corpus,
        args.category,
        k=args.k,
        C=args.outlier_C,
        config=config,
        stoplist=stoplist,
        phrases=phrases,
    )
    _emit(outlier_csv(report), args.out)
    return 0


def cmd_relabel(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus = load_corpus(_require(config.corpus, "--corpus"))
    verdicts = _read_verdicts(args.verdicts)
    updated, summary = apply_verdicts(corpus, args.category, verdicts)
    save_corpus(updated, args.out)
    if args.log:
        append_verdict_log(args.log, verdicts, actor=args.actor)
    print(
        json.dumps(
            {
                "category": summary.category,
                "moved_in": summary.moved_in,
                "moved_out": summary.moved_out,
                "kept": summary.kept,
                "positives_before": summary.positives_before,
                "positives_after": summary.positives_after,
                "positive_rate": summary.positive_rate,
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import build_state, create_app

    config = _resolve_config(args)
    bundle = load_bundle(args.model)
    corpus = load_corpus(_require(config.corpus, "--corpus"))
    state = build_state(bundle, corpus, verdict_log=args.log)
    app = create_app(state, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textcat",
        description="Train, inspect, and serve linear text categorizers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lexicon", help="build the term lexicon from a corpus")
    p.add_argument("--corpus")
    p.add_argument("--out", help="write the lexicon here")
    p.add_argument("--stopwords")
    p.add_argument("--phrases")
    p.add_argument("--suggest-phrases", type=int, dest="suggest_phrases", metavar="K")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_lexicon)

    p = sub.add_parser("train", help="train one model per category")
    p.add_argument("--corpus")
    p.add_argument("--out", dest="out_bundle", help="write the model bundle here")
    p.add_argument("--stopwords")
    p.add_argument("--phrases")
    p.add_argument("--categories", help="comma-separated override of the size cutoff")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify documents with a saved bundle")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="documents to classify (jsonl)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="confusion metrics on a labelled corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--curve", action="store_true", help="emit the size curve instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="sweep weighting, df threshold, and C")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--weightings", default="tf,tfidf")
    p.add_argument("--df-thresholds", dest="df_thresholds", default="2,5")
    p.add_argument("--C-grid", dest="C_grid", default="1.0")
    p.add_argument("--stopwords")
    p.add_argument("--phrases")
    p.add_argument("--out")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("trend", help="per-period share of predicted positives")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus")
    p.add_argument("--category", required=True)
    p.add_argument("--out")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("outliers", help="rank suspect labels for review")
    p.add_argument("--corpus")
    p.add_argument("--category", required=True)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--outlier-C", type=float, dest="outlier_C", help="override clean_C")
    p.add_argument("--stopwords")
    p.add_argument("--phrases")
    p.add_argument("--out")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_outliers)

    p = sub.add_parser("relabel", help="apply reviewer verdicts to a corpus")
    p.add_argument("--corpus")
    p.add_argument("--category", required=True)
    p.add_argument("--verdicts", required=True, help="verdict jsonl file")
    p.add_argument("--out", required=True, help="write the updated corpus here")
    p.add_argument("--log", help="append to this verdict audit log")
    p.add_argument("--actor", default="cli")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_relabel)

    p = sub.add_parser("serve", help="run the HTTP classification service")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--log", help="verdict audit log path")
    p.add_argument("--static", help="serve this directory at / (the triage ui)")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TextcatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
