"""Command line entry point.

Exit codes: 0 success, 1 validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig, TrainingSetRecipe
from .eval import (
    cross_validate,
    info_gain_ranking,
    min_posts_sensitivity,
    spread_subsample,
    threshold_rule_sweep,
)
from .features import FeatureSet, build_feature_matrix
from .ingest import (
    DuplicateAccountError,
    LabelPurityError,
    ParseError,
    count_table,
    parse_account_file,
    write_account_file,
)
from .report import (
    METRIC_COLUMNS,
    METRICS_HEADER,
    Manifest,
    full,
    metric_values,
    metrics_markdown,
    round3,
    to_csv,
    to_markdown,
    write_text,
)

logger = logging.getLogger("botbench")

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2
COUNT_THRESHOLDS = (0, 100, 200, 300, 400)


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------


def load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    for path in getattr(args, "data", None) or []:
        p = Path(path)
        cfg.training_sets.append(TrainingSetRecipe(p.stem, data=p))
    overrides = {
        "seed": args.seed,
        "k": args.k,
        "min_posts": args.min_posts,
        "window": args.window,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if args.clients is not None:
        cfg.clients = Path(args.clients)
    if args.out is not None:
        cfg.out = Path(args.out)
    return cfg


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _table(fmt: str, header, rows, title=None) -> str:
    return to_markdown(header, rows, title) if fmt == "md" else to_csv(header, rows)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_ingest(args) -> int:
    paths = [Path(p) for p in args.data]
    if args.config:
        cfg = ExperimentConfig.load(args.config)
        for recipe in cfg.training_sets:
            paths.extend(recipe.files())
    if not paths:
        raise ConfigError("no input files given")
    header = ("dataset", "class") + tuple(f">={t}" for t in COUNT_THRESHOLDS)
    rows = []
    failed = False
    for path in paths:
        if not path.is_file():
            raise ConfigError(f"file {path} does not exist")
        try:
            dataset = parse_account_file(path, strict=args.strict)
        except ParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
            failed = True
            continue
        for issue in dataset.issues:
            print(f"warning: {issue}", file=sys.stderr)
        table = count_table(dataset, COUNT_THRESHOLDS)
        rows.append((dataset.name, "bot", *table["bot"]))
        rows.append((dataset.name, "human", *table["human"]))
    _emit(_table(args.format, header, rows, title="Accounts with at least N posts"))
    return EXIT_VALIDATION if failed else EXIT_OK


def _prepare(args, need_sets=True) -> ExperimentConfig:
    cfg = load_config(args)
    cfg.validate(need_training_sets=need_sets)
    return cfg


def cmd_evaluate(args) -> int:
    cfg = _prepare(args)
    specs = cfg.learner_specs()
    feature_sets = cfg.feature_set_list()
    params = cfg.feature_params()
    out = Path(cfg.out)
    manifest = Manifest(out, "evaluate", cfg.snapshot(), cfg.seed)
    rounded, raw, curves = [], [], []
    error = None
    try:
        for recipe in cfg.training_sets:
            dataset = recipe.assemble(cfg.min_posts, cfg.require_cap)
            for fs in feature_sets:
                for spec in specs:
                    logger.info("cv %s / %s / %s", recipe.name, fs.value, spec.algorithm.value)
                    result = cross_validate(dataset, fs, spec, cfg.k, cfg.seed, params)
                    key = (recipe.name, fs.value, spec.algorithm.value)
                    values = metric_values(result.metrics)
                    rounded.append(key + tuple(round3(v) for v in values))
                    raw.append(key + tuple(full(v) for v in values))
                    for series in (result.roc, result.pr):
                        curves.extend(key + (series.kind, full(x), full(y)) for x, y in series.points)
    except Exception as exc:  # flushed below, then re-raised for the exit code
        error = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        write_text(out / "metrics.csv", to_csv(METRICS_HEADER, rounded), manifest)
        write_text(out / "metrics_raw.csv", to_csv(METRICS_HEADER, raw), manifest)
        write_text(
            out / "curves.csv",
            to_csv(("training_set", "feature_set", "algorithm", "kind", "x", "y"), curves),
            manifest,
        )
        if args.format == "md":
            write_text(out / "metrics.md", metrics_markdown(rounded), manifest)
        manifest.finish(error)
    _emit(metrics_markdown(rounded) if args.format == "md" else to_csv(METRICS_HEADER, rounded))
    return EXIT_OK


def cmd_threshold(args) -> int:
    cfg = _prepare(args)
    specs = cfg.learner_specs()
    params = cfg.feature_params()
    out = Path(cfg.out)
    manifest = Manifest(out, "threshold", cfg.snapshot(), cfg.seed)
    header = ("training_set", "method", "threshold") + METRIC_COLUMNS
    rows = []
    error = None
    try:
        for recipe in cfg.training_sets:
            dataset = recipe.assemble(cfg.min_posts, require_cap=False)
            if any(a.botometer_cap_uni is None for a in dataset.accounts):
                raise ConfigError(f"training set {recipe.name}: every account needs cap_uni for the threshold rule")
            _, X, y = build_feature_matrix(dataset, FeatureSet.CAP_UNI_STAR, params)
            th, rule_metrics = threshold_rule_sweep(X[:, 0], y)
            rows.append((recipe.name, "threshold_rule", round3(th)) + tuple(round3(v) for v in metric_values(rule_metrics)))
            best = None
            for spec in specs:
                result = cross_validate(dataset, FeatureSet.CAP_UNI_STAR, spec, cfg.k, cfg.seed, params)
                if best is None or result.metrics.balanced_accuracy > best[1].balanced_accuracy:
                    best = (spec, result.metrics)
            rows.append(
                (recipe.name, best[0].algorithm.value, "") + tuple(round3(v) for v in metric_values(best[1]))
            )
    except Exception as exc:
        error = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        write_text(out / "threshold.csv", to_csv(header, rows), manifest)
        manifest.finish(error)
    _emit(_table(args.format, header, rows, title="Threshold rule vs best learner on CAP*"))
    return EXIT_OK


def cmd_rank(args) -> int:
    cfg = _prepare(args)
    params = cfg.feature_params()
    out = Path(cfg.out)
    top_n = args.top if args.top is not None else cfg.top_n
    manifest = Manifest(out, "rank", cfg.snapshot(), cfg.seed)
    header = ("training_set", "rank", "feature", "info_gain", "normalized")
    rows, shown = [], []
    error = None
    try:
        for recipe in cfg.training_sets:
            dataset = recipe.assemble(cfg.min_posts, cfg.require_cap)
            ranking = info_gain_ranking(dataset, cfg.feature_set_list(), params)
            for i, r in enumerate(ranking, start=1):
                row = (recipe.name, i, r.name, full(r.gain), round3(r.normalized))
                rows.append(row)
                if i <= top_n:
                    shown.append(row[:3] + (round3(r.gain), row[4]))
    except Exception as exc:
        error = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        write_text(out / "rank.csv", to_csv(header, rows), manifest)
        manifest.finish(error)
    _emit(_table(args.format, header, shown, title="Feature ranking by information gain"))
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    cfg = _prepare(args)
    specs = cfg.learner_specs()
    params = cfg.feature_params()
    out = Path(cfg.out)
    thresholds = args.thresholds or cfg.thresholds
    manifest = Manifest(out, "sensitivity", cfg.snapshot(), cfg.seed)
    header = ("training_set", "feature_set", "algorithm", "min_posts", "window", "bot_count", "human_count", "roc_auc")
    rows = []
    error = None
    try:
        for recipe in cfg.training_sets:
            bots, humans = recipe.sources()
            for fs in cfg.feature_set_list():
                for spec in specs:
                    table = min_posts_sensitivity(
                        bots, humans, fs, spec, thresholds, cfg.k, cfg.seed, params,
                        require_cap=cfg.require_cap, max_window=cfg.window,
                    )
                    for r in table:
                        rows.append(
                            (recipe.name, fs.value, spec.algorithm.value, r.min_posts, r.window,
                             r.bot_count, r.human_count, full(r.roc_auc))
                        )
    except Exception as exc:
        error = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        write_text(out / "sensitivity.csv", to_csv(header, rows), manifest)
        manifest.finish(error)
    shown = [r[:7] + (round3(float(r[7])),) for r in rows]
    _emit(_table(args.format, header, shown, title="ROC-AUC by minimum number of posts"))
    return EXIT_OK


def cmd_subsample(args) -> int:
    cfg = load_config(args)
    ratio = args.ratio if args.ratio is not None else cfg.subsample_ratio
    if ratio < 1:
        raise ConfigError("ratio must be >= 1")
    out = Path(cfg.out)
    jobs = []
    if args.input:
        dataset = parse_account_file(args.input, strict=args.strict)
        target = Path(args.output) if args.output else out / f"{dataset.name}_subsampled.jsonl"
        jobs.append((dataset, target))
    else:
        cfg.validate()
        for recipe in cfg.training_sets:
            dataset = recipe.assemble(cfg.min_posts, cfg.require_cap)
            jobs.append((dataset, out / f"{recipe.name}_subsampled.jsonl"))
    header = ("dataset", "bot_before", "human_before", "bot_after", "human_after", "file")
    rows = []
    for dataset, target in jobs:
        sub = spread_subsample(dataset, ratio, cfg.seed)
        target.parent.mkdir(parents=True, exist_ok=True)
        write_account_file(sub, target)
        rows.append((dataset.name, dataset.bot_count, dataset.human_count, sub.bot_count, sub.human_count, str(target)))
    _emit(_table(args.format, header, rows, title="Spread subsampling"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config (JSON)")
    common.add_argument("--seed", type=int)
    common.add_argument("--k", type=int, help="number of cross-validation folds")
    common.add_argument("--min-posts", type=int, dest="min_posts")
    common.add_argument("--window", type=int, help="most recent tweets considered per account")
    common.add_argument("--clients", help="official client list, one name per line")
    common.add_argument("--out", help="output directory")
    common.add_argument("--strict", action="store_true", help="abort on the first malformed line")
    common.add_argument("--format", choices=("csv", "md"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="botbench", description="Social bot detection features and classifier benchmarking."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="count accounts per timeline length")
    p.add_argument("data", nargs="*", help="account files")
    p.set_defaults(func=cmd_ingest)

    for name, func, help_ in (
        ("evaluate", cmd_evaluate, "cross-validate every training set x feature set x algorithm"),
        ("threshold", cmd_threshold, "CAP* threshold rule vs learners"),
        ("rank", cmd_rank, "information-gain feature ranking"),
        ("sensitivity", cmd_sensitivity, "ROC-AUC as the minimum timeline length varies"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("data", nargs="*", help="mixed-label account files, one training set each")
        p.set_defaults(func=func)
        if name == "rank":
            p.add_argument("--top", type=int)
        if name == "sensitivity":
            p.add_argument("--thresholds", type=int, nargs="+")

    p = sub.add_parser("subsample", parents=[common], help="under-sample the majority class")
    p.add_argument("input", nargs="?", help="account file (otherwise every configured training set)")
    p.add_argument("--ratio", type=float, help="max majority:minority ratio")
    p.add_argument("--output", help="output file when a single input is given")
    p.set_defaults(func=cmd_subsample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParseError, DuplicateAccountError, LabelPurityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        logger.debug("runtime failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
