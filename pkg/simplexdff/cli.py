"""
Classify vertex-labeled graphs with diffusion Frechet functions on simplicial complexes.
"""
import argparse
import csv
import glob
import json
import logging
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional, Tuple

from .base_types import DEFAULT_T_VALUES, Variant
from .complex import count_triangles, incidence_matrix
from .errors import (
    ClassifierError,
    ComplexError,
    DatasetError,
    MalformedLine,
    MissingFile,
    MissingResults,
    NumericalError,
)
from .features import read_feature_csv, write_feature_csv
from .forest import ForestConfig, cross_validate
from .pipeline import build_complexes, extract_features, feature_filename, format_t
from .supergraph import compress, dump_supergraphs
from .tudata import load_dataset


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

BUILTIN_BASELINES = os.path.join(os.path.dirname(__file__), "data", "baselines.csv")


@dataclass(frozen=True)
class RunConfig:
    dataset_dir: Optional[str] = None
    dataset: Optional[str] = None
    variants: Tuple[Variant, ...] = tuple(Variant)
    t: Tuple[float, ...] = DEFAULT_T_VALUES
    folds: int = 10
    seed: int = 0
    repeats: int = 1
    trees: int = 100
    out: str = "."
    jobs: int = 1
    features_only: bool = False
    baselines: Optional[str] = None

    def __post_init__(self):
        if not self.variants:
            raise ValueError("At least one variant is required")
        if any(t <= 0 for t in self.t):
            raise ValueError("Diffusion times must be positive")
        if not self.t:
            raise ValueError("At least one diffusion time is required")
        if self.folds < 2:
            raise ValueError(f"folds must be at least 2, got {self.folds}")
        if self.repeats < 1 or self.jobs < 1 or self.trees < 1:
            raise ValueError("repeats, jobs and trees must be at least 1")

    @classmethod
    def from_options(cls, *layers):
        """
        Merge option dicts, later layers overriding earlier ones, on top of
        the defaults.

        Args:
            *layers (dict): e.g. config file contents, then command-line flags

        Returns:
            RunConfig
        """
        known = {f.name for f in fields(cls)}
        options = {}
        for layer in layers:
            layer = {k.replace("-", "_"): v for k, v in layer.items()}
            unknown = set(layer) - known
            if unknown:
                raise ValueError(f"Unknown option(s): {', '.join(sorted(unknown))}")
            options = {**options, **layer}

        if "variants" in options:
            variants = options["variants"]
            if isinstance(variants, str):
                variants = [variants]
            if list(variants) == ["all"]:
                variants = list(Variant)
            options["variants"] = tuple(Variant.parse(v) for v in variants)

        if "t" in options:
            t_values = options["t"]
            if not isinstance(t_values, (list, tuple)):
                t_values = [t_values]
            options["t"] = tuple(float(t) for t in t_values)

        return cls(**options)

    def require_dataset(self):
        if not self.dataset_dir or not self.dataset:
            raise ValueError("--dataset-dir and --dataset are required")

    def forest_config(self, repeat):
        return ForestConfig(num_trees=self.trees, seed=self.seed + repeat)


def _cells(cfg):
    return [(variant, t) for variant in cfg.variants for t in cfg.t]


def run_extract(cfg):
    """
    Extract features for every (variant, t) cell and write one CSV per cell.
    Files written by a failed run are removed.

    Args:
        cfg (RunConfig):

    Returns:
        dict((Variant, float), FeatureMatrix)
    """
    cfg.require_dataset()
    dataset = load_dataset(cfg.dataset_dir, cfg.dataset)
    os.makedirs(cfg.out, exist_ok=True)

    written = []
    try:
        cells = extract_features(dataset, cfg.variants, cfg.t, jobs=cfg.jobs)
        for variant, t in _cells(cfg):
            path = os.path.join(cfg.out, feature_filename(dataset.name, variant, t))
            written.append(path)
            write_feature_csv(path, cells[(variant, t)])
    except BaseException:
        for path in written:
            if os.path.exists(path):
                os.remove(path)
        raise

    logger.info("Wrote %d feature file(s) to %s", len(written), cfg.out)
    return cells


def _load_cells(cfg):
    """
    Read every cell's features from cfg.out, extracting them when any file is
    missing.
    """
    cells = {}
    for variant, t in _cells(cfg):
        path = os.path.join(cfg.out, feature_filename(cfg.dataset, variant, t))
        if not os.path.exists(path):
            logger.info("Feature file %s missing, extracting", path)
            return run_extract(cfg)
        cells[(variant, t)] = read_feature_csv(path, cfg.dataset, variant, t)

    return cells


def render_table(grid, variants, t_values):
    """
    Aligned text table of accuracies (percent), variants by rows.

    Args:
        grid (dict(str, dict(str, float))):
        variants (sequence(Variant)):
        t_values (sequence(float)):

    Returns:
        str
    """
    header = ["variant"] + [format_t(t) for t in t_values]
    rows = [
        [v.value] + [f"{100 * grid[v.value][format_t(t)]:.2f}" for t in t_values]
        for v in variants
    ]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]

    lines = []
    for row in [header] + rows:
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))

    return "\n".join(lines) + "\n"


def run_classify(cfg, cells=None):
    """
    Cross-validate every (variant, t) cell and write the results JSON and
    text table. With repeats > 1 a cell's accuracy is the mean of the
    per-repeat means.

    Args:
        cfg (RunConfig):
        cells (dict): Already extracted features

    Returns:
        dict: The results document
    """
    cfg.require_dataset()
    if cells is None:
        cells = _load_cells(cfg)

    grid = {v.value: {} for v in cfg.variants}
    reports = []
    for variant, t in _cells(cfg):
        features = cells[(variant, t)]
        means = []
        for repeat in range(cfg.repeats):
            report = cross_validate(features, cfg.folds, cfg.forest_config(repeat), jobs=cfg.jobs)
            reports.append(report.to_dict())
            means.append(report.mean_accuracy)
        grid[variant.value][format_t(t)] = sum(means) / len(means)

    best = {}
    for variant in cfg.variants:
        row = grid[variant.value]
        t_key = max(row, key=lambda k: (row[k], -list(row).index(k)))
        best[variant.value] = {"t": t_key, "accuracy": row[t_key]}

    results = {
        "dataset": cfg.dataset,
        "folds": cfg.folds,
        "seed": cfg.seed,
        "repeats": cfg.repeats,
        "trees": cfg.trees,
        "variants": [v.value for v in cfg.variants],
        "t_values": [format_t(t) for t in cfg.t],
        "grid": grid,
        "best": best,
        "reports": reports,
    }

    os.makedirs(cfg.out, exist_ok=True)
    table = render_table(grid, cfg.variants, cfg.t)
    with open(os.path.join(cfg.out, f"{cfg.dataset}_results.json"), "w") as f:
        json.dump(results, f, indent=2, sort_keys=True)
        f.write("\n")
    with open(os.path.join(cfg.out, f"{cfg.dataset}_results.txt"), "w") as f:
        f.write(table)

    sys.stdout.write(table)
    return results


def _read_baselines(path):
    with open(path, "r", newline="") as f:
        records = [row for row in csv.reader(f) if row]

    if not records or records[0][:3] != ["dataset", "method", "accuracy"]:
        raise MalformedLine(f"{path}: expected a dataset,method,accuracy header")

    rows = []
    for line_no, row in enumerate(records[1:], start=2):
        try:
            rows.append((row[0], row[1], float(row[2])))
        except (IndexError, ValueError):
            raise MalformedLine(f"{path}:{line_no}: invalid baseline row {row!r}")

    return rows


def run_report(cfg, plot_path=None):
    """
    Combine the best-over-t accuracy of every computed variant with the
    transcribed baseline accuracies into grouped-bar plot data.

    Args:
        cfg (RunConfig):
        plot_path (str): Defaults to <out>/plot_data.csv

    Returns:
        list(tuple(str, str, float, str)): dataset, method, accuracy, source
    """
    paths = sorted(glob.glob(os.path.join(cfg.out, "*_results.json")))
    if not paths:
        raise MissingResults(f"No *_results.json files in {cfg.out}")

    rows = []
    for path in paths:
        with open(path, "r") as f:
            results = json.load(f)
        for variant in results["variants"]:
            accuracy = round(100 * results["best"][variant]["accuracy"], 2)
            rows.append((results["dataset"], variant, accuracy, "computed"))

    if cfg.baselines:
        path = BUILTIN_BASELINES if cfg.baselines == "builtin" else cfg.baselines
        if not os.path.isfile(path):
            raise MissingFile(f"Baseline file not found: {path}")
        datasets = {r[0] for r in rows}
        rows.extend(
            (dataset, method, accuracy, "transcribed")
            for dataset, method, accuracy in _read_baselines(path)
            if dataset in datasets
        )

    plot_path = plot_path or os.path.join(cfg.out, "plot_data.csv")
    with open(plot_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["dataset", "method", "accuracy", "source"])
        writer.writerows((d, m, f"{a:.2f}", s) for d, m, a, s in rows)

    return rows


def _dump_incidence(path, dataset, complexes):
    """
    Write the sparse-triple form of D0 and D1 for every graph.
    """
    with open(path, "w") as f:
        for graph, sc in zip(dataset.graphs, complexes):
            f.write(f"## graph {graph.graph_id}\n")
            for p in (0, 1):
                f.write(incidence_matrix(sc, p).format_triples())


def run_stats(cfg, dump=None, dump_incidence=None, summary=False):
    """
    Print original and super-complex sizes of every graph, or with summary
    one dataset-level row: graphs, classes, average vertices and edges, and
    distinct vertex labels.

    Args:
        cfg (RunConfig):
        dump (str): Optional JSON-lines super-graph dump path
        dump_incidence (str): Optional incidence-matrix triple dump path
        summary (bool):

    Returns:
        list(dict)
    """
    cfg.require_dataset()
    dataset = load_dataset(cfg.dataset_dir, cfg.dataset)

    if summary:
        row = dataset.summary()
        sys.stdout.write("\t".join(row) + "\n")
        sys.stdout.write(
            "\t".join(f"{v:.2f}" if isinstance(v, float) else str(v) for v in row.values()) + "\n"
        )
        return [row]

    complexes = build_complexes(dataset, cfg.jobs)

    stats = []
    sys.stdout.write("graph_id\tclass\tvertices\tedges\ttriangles\tn0\tn1\tn2\tdropped\n")
    for graph, sc in zip(dataset.graphs, complexes):
        supergraph = compress(graph)
        row = {
            "graph_id": graph.graph_id,
            "class": graph.class_label,
            "vertices": graph.num_vertices,
            "edges": graph.num_edges,
            "triangles": count_triangles(graph.adjacency()),
            "n0": sc.count(0),
            "n1": sc.count(1),
            "n2": sc.count(2),
            "dropped": supergraph.dropped_selfloop_count,
        }
        stats.append(row)
        sys.stdout.write("\t".join(str(v) for v in row.values()) + "\n")

    if dump:
        dump_supergraphs(dump, (compress(g) for g in dataset.graphs))
    if dump_incidence:
        _dump_incidence(dump_incidence, dataset, complexes)

    return stats


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_options(parser, suppress):
    parser.add_argument("--config", help="JSON file with the same keys as the flags")
    parser.add_argument("--dataset-dir", default=suppress)
    parser.add_argument("--dataset", default=suppress)
    parser.add_argument("--variants", nargs="+", default=suppress, help="Variant names or 'all'")
    parser.add_argument("--t", nargs="+", type=float, default=suppress, help="Diffusion times")
    parser.add_argument("--folds", type=int, default=suppress)
    parser.add_argument("--seed", type=int, default=suppress)
    parser.add_argument("--repeats", type=int, default=suppress)
    parser.add_argument("--trees", type=int, default=suppress)
    parser.add_argument("--out", default=suppress)
    parser.add_argument("--jobs", type=int, default=suppress)


def build_parser():
    suppress = argparse.SUPPRESS
    parser = _ArgumentParser(prog="simplexdff", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    commands.required = True

    run = commands.add_parser("run", help="Extract features, then classify")
    _add_run_options(run, suppress)
    run.add_argument("--features-only", action="store_true", default=suppress)

    classify = commands.add_parser("classify", help="Classify previously extracted features")
    _add_run_options(classify, suppress)

    report = commands.add_parser("report", help="Write grouped-bar plot data")
    _add_run_options(report, suppress)
    report.add_argument("--baselines", default=suppress, help="CSV path, or 'builtin'")
    report.add_argument("--plot-data", dest="plot_data", default=None)

    stats = commands.add_parser("stats", help="Per-graph super-complex sizes")
    _add_run_options(stats, suppress)
    stats.add_argument("--dump", default=None, help="JSON-lines super-graph dump")
    stats.add_argument("--dump-incidence", default=None, help="Incidence-matrix triple dump")
    stats.add_argument("--summary", action="store_true", help="One dataset-level row")

    return parser


def _config_from_args(args):
    flags = vars(args).copy()
    for key in (
        "command", "verbose", "quiet", "config", "plot_data", "dump", "dump_incidence", "summary"
    ):
        flags.pop(key, None)

    layers = []
    if args.config:
        try:
            with open(args.config, "r") as f:
                layers.append(json.load(f))
        except (OSError, json.JSONDecodeError) as e:
            raise ValueError(f"Cannot read config file {args.config}: {e}")
    layers.append(flags)

    return RunConfig.from_options(*layers)


def main(argv=None):
    """
    Command-line entry point.

    Args:
        argv (list(str)):

    Returns:
        int: Exit code
    """
    args = build_parser().parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        cfg = _config_from_args(args)
        if args.command != "report":
            cfg.require_dataset()
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_USAGE

    try:
        if args.command == "run":
            cells = run_extract(cfg)
            if not cfg.features_only:
                run_classify(cfg, cells)
        elif args.command == "classify":
            run_classify(cfg)
        elif args.command == "report":
            run_report(cfg, args.plot_data)
        elif args.command == "stats":
            run_stats(cfg, args.dump, args.dump_incidence, args.summary)
    except NumericalError as e:
        logger.error("Numerical failure: %s", e)
        return EXIT_NUMERICAL
    except (DatasetError, ComplexError, ClassifierError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_DATA
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return EXIT_DATA

    return EXIT_OK
