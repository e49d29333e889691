"""Command-line interface for rmcca.

Subcommands: kcca, fcca, hopkins, synth, convergence. Results go to files in
the output directory; progress and diagnostics go to standard error. Exit
status is 0 on success, 1 on invalid input and 2 on numerical failure.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from rmcca.analysis.visualizer import scatter_filename, write_scatter
from rmcca.core.config import AnalysisConfig, load_config
from rmcca.core.exceptions import InvalidValueError, NumericalError, OutputFileError, RMCCAError, ValidationError
from rmcca.core.types import canonical_points
from rmcca.core.utils import generate_run_id, parse_index_list, safe_json_dumps
from rmcca.evaluation.hopkins import hopkins, hopkins_curve
from rmcca.experiments.convergence import DEFAULT_MAX_REFERENCE, convergence_study
from rmcca.experiments.synthetic import SyntheticSpec, gen_latent_dataset
from rmcca.io.dataset import load_dataset, write_dataset
from rmcca.io.report import read_points, write_json, write_report, write_scores_csv, write_weight_curves
from rmcca.logging import EventType, RunLogger
from rmcca.methods.registry import get_method, list_methods

SUBCOMMANDS = ("kcca", "fcca", "hopkins", "synth", "convergence")
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

# flag name -> AnalysisConfig key
CONFIG_FLAGS = {
    "kernel": "kernel",
    "kernel_gamma": "kernel_gamma",
    "epsilon": "epsilon",
    "n_components": "n_components",
    "basis_size": "basis_size",
    "hopkins_m": "hopkins_m",
    "hopkins_reps": "hopkins_reps",
    "hopkins_region": "hopkins_region",
    "hopkins_classical": "hopkins_classical",
    "rng_seed": "rng_seed",
    "standardize": "standardize",
    "truncation_tol": "truncation_tol",
    "eig_method": "eig_method",
}

SYNTH_FLAGS = ("n", "L", "T", "p", "latent_dim", "loading_scale", "noise_sd", "seed", "n_groups")


@dataclass
class Command:
    """One parsed invocation.

    Attributes:
        subcommand: kcca | fcca | hopkins | synth | convergence
        input_path: Dataset or score file (kcca, fcca, hopkins)
        config_path: Optional configuration file
        output_dir: Directory for result files
        overrides: AnalysisConfig keys set on the command line
        options: Subcommand options (column selection, synthetic spec, sizes)
    """

    subcommand: str
    input_path: Optional[Path] = None
    config_path: Optional[Path] = None
    output_dir: Path = Path("out")
    overrides: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate the subcommand."""
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidValueError(f"unknown subcommand '{self.subcommand}'", {"choices": SUBCOMMANDS})


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors are validation errors (exit 1)."""

    def error(self, message):
        raise InvalidValueError(f"usage: {message}")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", dest="config_path", help="Configuration file (key = value lines)")
    parser.add_argument("-o", "--output-dir", default="out", help="Output directory (default: out)")
    parser.add_argument("--log-file", help="Append JSONL run events to this file")
    parser.add_argument("--quiet", action="store_true", help="Do not echo progress to stderr")
    for flag in CONFIG_FLAGS:
        parser.add_argument("--" + flag.replace("_", "-"), dest=flag, help=f"Override '{flag}'")


def _add_selection_flags(parser: argparse.ArgumentParser, default_columns: Optional[str]) -> None:
    parser.add_argument(
        "--columns",
        default=default_columns,
        help="1-based components (or matrix columns) forming the point set, e.g. 1,2 or 1-3",
    )
    parser.add_argument("--feature", type=int, help="1-based feature whose scores form the points (default: mean)")


def _add_synth_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=100, help="Units")
    parser.add_argument("--L", type=int, default=2, help="Features")
    parser.add_argument("--T", type=int, default=1, help="Time points")
    parser.add_argument("--p", type=int, default=1, help="Variables per feature")
    parser.add_argument("--latent-dim", type=int, default=1, help="Shared latent factors")
    parser.add_argument("--loading-scale", type=float, default=1.0, help="Signal scale")
    parser.add_argument("--noise-sd", type=float, default=1.0, help="Noise standard deviation")
    parser.add_argument("--seed", type=int, default=0, help="Stream seed")
    parser.add_argument("--n-groups", type=int, default=0, help="Group labels from factor quantiles")


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = _ArgumentParser(
        prog="rmcca",
        description="Multiple kernel and functional CCA for repeated-measures data",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Kernel MCCA with a config file
  rmcca kcca data.csv --config configs/kernel.yaml -o out/

  # Functional MCCA with a nine-function Fourier basis
  rmcca fcca data.csv --basis-size 9 -o out/

  # Hopkins statistic of the first two components
  rmcca hopkins out/scores.csv --columns 1,2 -o out/
        """,
    )
    subparsers = parser.add_subparsers(dest="subcommand", parser_class=_ArgumentParser)

    for name, help_text in (("kcca", "Multiple kernel CCA"), ("fcca", "Multiple functional CCA")):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("input", help="Dataset CSV (unit,feature,time,variable,value[,group])")
        _add_config_flags(sub)
        _add_selection_flags(sub, "1,2")
        sub.add_argument("--hopkins", action="store_true", help="Add a clusterability section to the report")

    sub = subparsers.add_parser("hopkins", help="Hopkins statistic of a score file or numeric matrix")
    sub.add_argument("input", help="Scores CSV (unit,component,feature,score) or numeric matrix CSV")
    _add_config_flags(sub)
    _add_selection_flags(sub, None)
    sub.add_argument("--curve", type=int, help="Evaluate H for the first k components, k = 1..CURVE")

    sub = subparsers.add_parser("synth", help="Write a synthetic latent-factor dataset")
    sub.add_argument("-o", "--output-dir", default="out", help="Output directory (default: out)")
    sub.add_argument("--quiet", action="store_true", help="Do not echo progress to stderr")
    sub.add_argument("--log-file", help="Append JSONL run events to this file")
    _add_synth_flags(sub)

    sub = subparsers.add_parser("convergence", help="Empirical convergence study on synthetic data")
    sub.add_argument("-o", "--output-dir", default="out", help="Output directory (default: out)")
    sub.add_argument("--quiet", action="store_true", help="Do not echo progress to stderr")
    sub.add_argument("--log-file", help="Append JSONL run events to this file")
    _add_synth_flags(sub)
    sub.add_argument("--sizes", default="100,400,1600", help="Increasing sample sizes")
    sub.add_argument("--reps", type=int, default=20, help="Replications per size")
    sub.add_argument("--method", choices=list_methods(), default="kernel")
    sub.add_argument("--kernel", choices=["linear", "gaussian"], default="linear")
    sub.add_argument("--basis-size", type=int, default=5, help="Basis size for the functional method")
    sub.add_argument("--max-reference-size", type=int, default=DEFAULT_MAX_REFERENCE)
    return parser


def parse_command(argv: Optional[Sequence[str]] = None) -> Command:
    """Parse command-line arguments into a Command."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.subcommand:
        raise InvalidValueError("a subcommand is required", {"choices": SUBCOMMANDS})

    options: Dict[str, Any] = {
        "log_file": getattr(args, "log_file", None),
        "quiet": getattr(args, "quiet", False),
    }
    overrides: Dict[str, Any] = {}
    if args.subcommand in ("kcca", "fcca", "hopkins"):
        overrides = {key: getattr(args, flag) for flag, key in CONFIG_FLAGS.items() if getattr(args, flag) is not None}
        options["columns"] = args.columns
        options["feature"] = args.feature
        options["hopkins"] = getattr(args, "hopkins", False)
        options["curve"] = getattr(args, "curve", None)
    else:
        options["synthetic"] = {key: getattr(args, key) for key in SYNTH_FLAGS}
    if args.subcommand == "convergence":
        options.update(
            sizes=_parse_sizes(args.sizes),
            reps=args.reps,
            method=args.method,
            kernel=args.kernel,
            basis_size=args.basis_size,
            max_reference_size=args.max_reference_size,
        )

    return Command(
        subcommand=args.subcommand,
        input_path=Path(args.input) if getattr(args, "input", None) else None,
        config_path=Path(args.config_path) if getattr(args, "config_path", None) else None,
        output_dir=Path(args.output_dir),
        overrides=overrides,
        options=options,
    )


def _parse_sizes(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidValueError(f"sample sizes must be a comma-separated integer list, got '{text}'")


def _config(command: Command) -> AnalysisConfig:
    base = load_config(command.config_path) if command.config_path else AnalysisConfig()
    overrides = dict(command.overrides)
    if command.subcommand == "kcca":
        overrides["method"] = "kernel"
    elif command.subcommand == "fcca":
        overrides["method"] = "functional"
    return base.with_overrides(overrides)


def _feature_index(command: Command) -> Optional[int]:
    feature = command.options.get("feature")
    return None if feature is None else int(feature) - 1


def _run_analysis(command: Command, logger: RunLogger) -> None:
    config = _config(command)
    dataset = load_dataset(command.input_path)
    logger.log(EventType.DATA_LOADED, dataset.summary())

    solution = get_method(config.method)(dataset, config, logger)
    columns = parse_index_list(command.options.get("columns") or "1,2")
    feature = _feature_index(command)

    clusterability = None
    if command.options.get("hopkins"):
        points = canonical_points(solution.scores, columns, feature)
        clusterability = hopkins(
            points,
            m=config.resolve_hopkins_m(points.shape[0]),
            reps=config.hopkins_reps,
            seed=config.rng_seed,
            region=config.hopkins_region,
            classical=config.hopkins_classical,
            logger=logger,
        )

    out = command.output_dir
    written = [
        write_report(solution, clusterability, out / "report.json", config),
        write_scores_csv(solution, out / "scores.csv"),
    ]
    pair = columns[:2]
    if len(pair) == 2 and max(pair) < solution.n_components:
        written.append(write_scatter(solution.scores, solution.group_labels, out / scatter_filename(pair), pair, feature))
    else:
        logger.warning("scatter skipped: fewer than two selected components", components=solution.n_components)
    if config.method == "functional":
        written.append(write_weight_curves(solution, config.basis_size, out / "weights.csv"))
    logger.log(EventType.OUTPUT_WRITTEN, {"files": [str(p) for p in written]})


def _run_hopkins(command: Command, logger: RunLogger) -> None:
    config = _config(command)
    scores, matrix = read_points(command.input_path)
    feature = _feature_index(command)
    columns_text = command.options.get("columns")
    document: Dict[str, Any] = {}

    if scores is not None:
        default = "1,2" if scores.shape[0] >= 2 else "1"
        points = canonical_points(scores, parse_index_list(columns_text or default), feature)
    else:
        columns = parse_index_list(columns_text) if columns_text else list(range(matrix.shape[1]))
        if max(columns) >= matrix.shape[1]:
            raise InvalidValueError("column selection exceeds the matrix width", {"columns": matrix.shape[1]})
        points = matrix[:, columns]

    m = config.resolve_hopkins_m(points.shape[0])
    result = hopkins(
        points,
        m=m,
        reps=config.hopkins_reps,
        seed=config.rng_seed,
        region=config.hopkins_region,
        classical=config.hopkins_classical,
        logger=logger,
    )
    document["hopkins"] = result.to_dict()

    curve = command.options.get("curve")
    if curve:
        if scores is None:
            raise InvalidValueError("--curve needs a scores file")
        results = hopkins_curve(
            scores,
            int(curve),
            m=m,
            reps=config.hopkins_reps,
            seed=config.rng_seed,
            feature=feature,
            region=config.hopkins_region,
            classical=config.hopkins_classical,
        )
        document["curve"] = [dict(r.to_dict(), components=k + 1) for k, r in enumerate(results)]
    path = write_json(document, command.output_dir / "hopkins.json")
    logger.log(EventType.OUTPUT_WRITTEN, {"files": [str(path)]})


def _run_synth(command: Command, logger: RunLogger) -> None:
    spec = SyntheticSpec(**command.options["synthetic"])
    path = write_dataset(gen_latent_dataset(spec), command.output_dir / "dataset.csv")
    logger.log(EventType.OUTPUT_WRITTEN, {"files": [str(path)]})


def _run_convergence(command: Command, logger: RunLogger) -> None:
    options = command.options
    spec = SyntheticSpec(**options["synthetic"])
    report = convergence_study(
        spec,
        options["sizes"],
        reps=options["reps"],
        method=options["method"],
        kernel=options["kernel"],
        basis_size=options["basis_size"],
        max_reference_size=options["max_reference_size"],
        logger=logger,
    )
    out = command.output_dir
    report_path = write_json(report.to_dict(), out / "convergence.json")
    errors_path = out / "convergence_errors.csv"
    try:
        errors_path.parent.mkdir(parents=True, exist_ok=True)
        report.errors_frame().to_csv(errors_path, index=False, lineterminator="\n", float_format="%.17g")
    except OSError as e:
        raise OutputFileError(f"cannot write {errors_path}", {"path": str(errors_path), "error": str(e)})
    logger.log(EventType.OUTPUT_WRITTEN, {"files": [str(report_path), str(errors_path)]})


HANDLERS = {
    "kcca": _run_analysis,
    "fcca": _run_analysis,
    "hopkins": _run_hopkins,
    "synth": _run_synth,
    "convergence": _run_convergence,
}


def run(command: Command, logger: Optional[RunLogger] = None) -> int:
    """Execute a command and return its exit status."""
    if logger is None:
        payload = safe_json_dumps(
            {"sub": command.subcommand, "input": str(command.input_path), "overrides": command.overrides},
            sort_keys=True,
        )
        logger = RunLogger(
            run_id=generate_run_id(command.subcommand, payload),
            log_file=command.options.get("log_file"),
            echo=not command.options.get("quiet", False),
        )
    logger.log(EventType.RUN_START, {"subcommand": command.subcommand})
    try:
        HANDLERS[command.subcommand](command, logger)
    except ValidationError as e:
        logger.error(str(e), kind=type(e).__name__)
        _diagnostic(e)
        return EXIT_INVALID
    except NumericalError as e:
        logger.error(str(e), kind=type(e).__name__)
        _diagnostic(e)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as e:
        logger.error(str(e), kind="LinAlgError")
        _diagnostic(NumericalError(f"linear algebra failure: {e}"))
        return EXIT_NUMERICAL
    logger.log(EventType.RUN_END, {"status": EXIT_OK})
    return EXIT_OK


def _diagnostic(error: RMCCAError) -> None:
    print(f"error: {error}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point."""
    try:
        command = parse_command(argv)
    except ValidationError as e:
        _diagnostic(e)
        return EXIT_INVALID
    return run(command)


if __name__ == "__main__":
    sys.exit(main())
