"""Command-line entry point for the analysis pipeline and services.

Exit codes: 0 success, 1 stage failure, 2 configuration error.
"""

import argparse
import json
import sys

from srcmine.pipeline.config import ConfigError, load_config
from srcmine.pipeline.manifest import DependencyError
from srcmine.pipeline.stages import StageFailure, run_stage

EXIT_OK = 0
EXIT_STAGE_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def _add_global_flags(parser):
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="global random seed")
    parser.add_argument("--jobs", type=int, help="per-stage parallelism bound")
    parser.add_argument("--cache-dir", help="probe cache directory")
    parser.add_argument("--out-dir", help="artifact output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srcmine",
        description="Mine scholarly papers for released source code and analyze it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse the corpus into documents")
    p.add_argument("--corpus", help="line-delimited corpus file")
    _add_global_flags(p)

    p = sub.add_parser("extract-urls", help="extract URL mentions from documents")
    _add_global_flags(p)

    p = sub.add_parser("classify", help="decide which mentions are own-code links")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--rules", action="store_true", help="cue-phrase rules (default)")
    mode.add_argument("--model", help="path to a trained sentence model")
    mode.add_argument("--remote", help="remote classifier endpoint URL")
    _add_global_flags(p)

    p = sub.add_parser("probe", help="probe repository URLs for accessibility/metadata")
    p.add_argument("--github-base-url", help="repository API base URL")
    _add_global_flags(p)

    p = sub.add_parser("readme-segment", help="segment fetched README files into units")
    _add_global_flags(p)

    p = sub.add_parser("readme-classify", help="label README units")
    p.add_argument("--model", help="path to a trained dual-field model")
    _add_global_flags(p)

    p = sub.add_parser("train-sentence", help="train the sentence baseline classifier")
    p.add_argument("--data", required=True, help="JSONL of {text, label}")
    p.add_argument("--model-out", required=True)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--l2", type=float, default=1e-4)
    _add_global_flags(p)

    p = sub.add_parser("train-readme", help="train the dual-field unit classifier")
    p.add_argument("--data", required=True, help="JSONL unit dataset with labels")
    p.add_argument("--model-out", required=True)
    p.add_argument("--learning-rate", type=float, default=1.0)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--l2", type=float, default=1e-4)
    _add_global_flags(p)

    p = sub.add_parser("stats", help="run the statistical battery into report.json")
    _add_global_flags(p)

    p = sub.add_parser("report", help="export CSV tables from report.json")
    _add_global_flags(p)

    p = sub.add_parser("run-all", help="run every stage in order")
    p.add_argument("--corpus", help="line-delimited corpus file")
    _add_global_flags(p)

    p = sub.add_parser("serve", help="start the annotation service (and host the UI)")
    p.add_argument("--readmes", required=True, help="JSONL of {repo_url, markdown}")
    p.add_argument("--annotators", required=True, help="comma-separated annotator ids")
    p.add_argument("--resolver", default="resolver")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--ui-dir", help="built labeler UI bundle to mount at /")
    p.add_argument("--log", help="append-only submission log path")
    _add_global_flags(p)

    p = sub.add_parser("label-export", help="export the labeled dataset from a submission log")
    p.add_argument("--log", required=True)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--resolver", default="resolver")
    _add_global_flags(p)

    return parser


def _config_from_args(args, **extra):
    overrides = {
        "seed": getattr(args, "seed", None),
        "jobs": getattr(args, "jobs", None),
        "cache_dir": getattr(args, "cache_dir", None),
        "out_dir": getattr(args, "out_dir", None),
    }
    overrides.update(extra)
    return load_config(path=getattr(args, "config", None), overrides=overrides)


def _print_manifest(manifest):
    counters = ", ".join(f"{k}={v}" for k, v in sorted(manifest.counters.items()))
    print(f"[{manifest.stage}] done ({counters})")


def _run_one(stage, config):
    try:
        manifest = run_stage(stage, config)
    except DependencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILURE
    except StageFailure as exc:
        if exc.manifest is not None:
            _print_manifest(exc.manifest)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILURE
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILURE
    _print_manifest(manifest)
    return EXIT_OK


def _cmd_classify(args):
    mode, model_path, endpoint = "rules", None, None
    if args.model:
        mode, model_path = "model", args.model
    elif args.remote:
        mode, endpoint = "remote", args.remote
    config = _config_from_args(
        args, classifier_mode=mode, model_path=model_path, remote_endpoint=endpoint
    )
    return _run_one("classify", config)


def _cmd_train_sentence(args):
    from srcmine.classify.dataset import LabeledSentence, split_dataset
    from srcmine.classify.model import Hyperparams, evaluate, save_model, train

    config = _config_from_args(args)
    with open(args.data, encoding="utf-8") as fh:
        sentences = [
            LabeledSentence(text=rec["text"], label=rec["label"],
                            source_paper_id=rec.get("source_paper_id", ""))
            for rec in (json.loads(line) for line in fh if line.strip())
        ]
    split = split_dataset(sentences, seed=config.seed)
    hyper = Hyperparams(learning_rate=args.learning_rate, epochs=args.epochs, l2=args.l2)
    result = train(split, hyper)
    save_model(result.model, args.model_out)
    metrics = evaluate(result.model, split.test)
    print(
        f"trained on {len(split.train)} sentences; best epoch {result.best_epoch}; "
        f"test accuracy {metrics.accuracy:.3f}, F1 {metrics.f1:.3f}"
    )
    return EXIT_OK


def _cmd_train_readme(args):
    from srcmine.classify.model import Hyperparams
    from srcmine.readme.dataset import read_units
    from srcmine.readme.model import (
        UnitSample,
        evaluate_multilabel,
        save_dual_model,
        split_units,
        train_multilabel,
    )

    config = _config_from_args(args)
    samples = [
        UnitSample(header_text=r.header_text, subtext=r.subtext, labels=frozenset(r.labels))
        for r in read_units(args.data)
        if r.labels
    ]
    split = split_units(samples, seed=config.seed)
    hyper = Hyperparams(learning_rate=args.learning_rate, epochs=args.epochs, l2=args.l2)
    result = train_multilabel(split, hyper)
    save_dual_model(result.model, args.model_out)
    metrics = evaluate_multilabel(result.model, split.test)
    if result.unreliable_labels:
        print(f"warning: no positives for {', '.join(result.unreliable_labels)}")
    print(
        f"trained on {len(split.train)} units; best epoch {result.best_epoch}; "
        f"test subset accuracy {metrics.subset_accuracy:.3f}, "
        f"weighted F1 {metrics.weighted_f1:.3f}"
    )
    return EXIT_OK


def _load_fixture_readmes(path):
    from srcmine.readme import analyze_readme

    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                docs.append(analyze_readme(rec["repo_url"], rec["markdown"]))
    return docs


def _cmd_serve(args):
    import uvicorn

    from srcmine.annotation.service import create_app
    from srcmine.annotation.store import AnnotationStore

    config = _config_from_args(args)
    store = AnnotationStore(resolver_id=args.resolver, log_path=args.log)
    docs = _load_fixture_readmes(args.readmes)
    annotators = [a.strip() for a in args.annotators.split(",") if a.strip()]
    created = store.create_tasks(docs, annotators, seed=config.seed)
    print(f"seeded {len(docs)} readmes -> {len(created)} tasks for {len(annotators)} annotators")
    app = create_app(store, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _cmd_label_export(args):
    from srcmine.annotation.store import AnnotationStore
    from srcmine.readme.dataset import record_to_json

    store = AnnotationStore.replay(args.log, resolver_id=args.resolver)
    result = store.export_dataset()
    lines = [record_to_json(r) for r in result["records"]]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    else:
        for line in lines:
            print(line)
    print(
        f"exported {len(lines)} records "
        f"({result['excluded_pending']} unresolved excluded)",
        file=sys.stderr,
    )
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            return _run_one("ingest", _config_from_args(args, corpus_path=args.corpus))
        if args.command == "extract-urls":
            return _run_one("extract", _config_from_args(args))
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "probe":
            return _run_one(
                "probe", _config_from_args(args, github_base_url=args.github_base_url)
            )
        if args.command == "readme-segment":
            import os

            from srcmine.pipeline.stages import stage_readme_segment

            config = _config_from_args(args)
            try:
                manifest = stage_readme_segment(config)
            except DependencyError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_STAGE_FAILURE
            manifest.save(os.path.join(config.out_dir, "manifests"), "readme-segment")
            _print_manifest(manifest)
            return EXIT_OK
        if args.command == "readme-classify":
            import os

            mode = "model" if args.model else "rules"
            config = _config_from_args(args, classifier_mode=mode, model_path=args.model)
            from srcmine.pipeline.stages import stage_readme_classify

            try:
                manifest = stage_readme_classify(config)
            except DependencyError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_STAGE_FAILURE
            manifest.save(os.path.join(config.out_dir, "manifests"), "readme-classify")
            _print_manifest(manifest)
            return EXIT_OK
        if args.command == "train-sentence":
            return _cmd_train_sentence(args)
        if args.command == "train-readme":
            return _cmd_train_readme(args)
        if args.command == "stats":
            return _run_one("stats", _config_from_args(args))
        if args.command == "report":
            return _run_one("report", _config_from_args(args))
        if args.command == "run-all":
            from srcmine.pipeline.manifest import STAGES

            config = _config_from_args(args, corpus_path=args.corpus)
            for stage in STAGES:
                code = _run_one(stage, config)
                if code != EXIT_OK:
                    print(f"stopping: stage {stage} failed", file=sys.stderr)
                    return code
            return EXIT_OK
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "label-export":
            return _cmd_label_export(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
