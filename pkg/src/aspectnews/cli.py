"""Command line entry points: build, serve, eval."""
from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys

from .store import BuildConfig, BuildError, CorpusStore, StoreIntegrityError, build_corpus


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspectnews",
        description="Structure news archives by person roles and role aspects.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="run the pipeline and write a corpus store")
    p_build.add_argument("--config", required=True, help="JSON build config file")
    p_build.add_argument("--out", required=True, help="output store directory (must be new)")
    p_build.add_argument("--seed", type=int, default=None, help="override the config seed")

    p_serve = sub.add_parser("serve", help="serve a store read-only over HTTP")
    p_serve.add_argument("--store", default=os.environ.get("STORE"), help="store directory")
    p_serve.add_argument(
        "--port", type=int, default=int(os.environ.get("PORT", "8000")), help="listen port"
    )
    p_serve.add_argument("--ui", default=None, help="static UI assets to mount under /")

    p_eval = sub.add_parser("eval", help="print per-role metrics and readability rows")
    p_eval.add_argument("--store", required=True, help="store directory")
    return parser


def _mean_std(values: list[float]) -> str:
    if not values:
        return "-"
    mean = statistics.fmean(values)
    std = statistics.pstdev(values) if len(values) > 1 else 0.0
    return f"{mean:.2f}±{std:.2f}"


def _cmd_build(args) -> int:
    config = BuildConfig.from_file(args.config)
    if args.seed is not None:
        config.seed = args.seed
    store = build_corpus(config, args.out)
    counts = store.manifest["counts"]
    print(f"store written to {args.out}")
    print(
        "counts: "
        + ", ".join(f"{key}={counts[key]}" for key in sorted(counts))
    )
    for warning in store.manifest["warnings"]:
        print(f"warning: {warning}")
    return 0


def _cmd_serve(args) -> int:
    if not args.store:
        print("serve: no store directory given (use --store or $STORE)", file=sys.stderr)
        return 1
    from .server import serve

    serve(args.store, port=args.port, ui_dir=args.ui)
    return 0


def _cmd_eval(args) -> int:
    store = CorpusStore.load(args.store, verify=True)

    header = f"{'Role':<24} {'#Aspects':>8} {'#Samples':>8} {'Precision':>9} {'Recall':>7} {'F1':>7} {'Accuracy':>8}"
    print(header)
    print("-" * len(header))
    for role in sorted(store.models):
        model = store.models[role]
        metrics = model["metrics"]
        n_aspects = len(model["classes"]) - 1  # minus the negative class
        print(
            f"{role:<24} {n_aspects:>8} {model['n_examples']:>8} "
            f"{metrics['macro_precision']:>9.4f} {metrics['macro_recall']:>7.4f} "
            f"{metrics['macro_f1']:>7.4f} {metrics['accuracy']:>8.4f}"
        )

    summaries = []
    for doc in store.persons.values():
        for role_entry in doc["roles"]:
            for aspect_entry in role_entry["aspects"]:
                if aspect_entry["summary"] is not None:
                    summaries.append(aspect_entry["summary"])
    print()
    k = store.manifest["config"]["k"]
    print(
        f"{'Summary@k':<12} {'#Summaries':>10} {'#Sent.':>12} {'Flesch EN':>14} "
        f"{'Flesch NL':>14} {'Reading Time':>14} {'Dale-Chall':>12}"
    )
    metrics = [s["metrics"] for s in summaries]
    print(
        f"{k:<12} {len(summaries):>10} "
        f"{_mean_std([m['sentence_count'] for m in metrics]):>12} "
        f"{_mean_std([m['flesch_en'] for m in metrics]):>14} "
        f"{_mean_std([m['flesch_nl'] for m in metrics]):>14} "
        f"{_mean_std([m['reading_time_s'] for m in metrics]):>14} "
        f"{_mean_std([m['dale_chall'] for m in metrics]):>12}"
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "eval":
            return _cmd_eval(args)
    except BuildError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, StoreIntegrityError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
