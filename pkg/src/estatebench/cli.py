"""The `bench` command line interface.

Exit codes: 0 success, 1 pipeline failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (
    ALL_MODEL_KINDS,
    BenchConfig,
    InputNotFound,
    PipelineError,
    SyntheticSpec,
    describe_synthetic,
    export_scatter,
    render_report,
    run_benchmark,
)
from .ensemble import ModelKind

_DEFAULTS = {
    "noise": 6000.0,
    "seed": 42,
    "test_fraction": 0.25,
    "format": "md",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description="Tabular ensemble-regression benchmark.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the benchmark pipeline")
    run.add_argument("--input", metavar="FILE", help="CSV input file")
    run.add_argument("--synth", metavar="N", type=int, help="generate N synthetic listings instead")
    run.add_argument("--noise", metavar="S", type=float, help="synthetic noise sigma in dollars (default 6000)")
    run.add_argument("--seed", metavar="U64", type=int, help="global seed (default 42)")
    run.add_argument("--test-fraction", metavar="F", type=float, help="test fraction (default 0.25)")
    run.add_argument("--models", metavar="LIST", help="comma-separated model kinds (default all eight)")
    run.add_argument("--report", metavar="PATH", help="write the report here instead of stdout")
    run.add_argument("--format", choices=["md", "markdown", "csv", "json"], help="report format (default md)")
    run.add_argument("--scatter-dir", metavar="DIR", help="export actual/predicted CSVs into this directory")
    run.add_argument("--config", metavar="FILE", help="key=value config file mirroring the flags; flags win")

    sub.add_parser("describe-synth", help="print the synthetic ground-truth price function")
    return parser


def _load_config_file(path: str, parser: argparse.ArgumentParser) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"{path}:{line_no}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _parse_models(text: str, parser: argparse.ArgumentParser) -> tuple[ModelKind, ...]:
    kinds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            kinds.append(ModelKind.parse(part))
        except ValueError as exc:
            parser.error(str(exc))
    if not kinds:
        parser.error("--models must name at least one model")
    return tuple(sorted(set(kinds), key=lambda k: k.display_name))


def _merged_option(args, config: dict, key: str, convert=str):
    value = getattr(args, key)
    if value is not None:
        return value
    if key in config:
        try:
            return convert(config[key])
        except ValueError:
            raise SystemExit(2)
    return _DEFAULTS.get(key)


def _cmd_run(args, parser: argparse.ArgumentParser) -> int:
    config = _load_config_file(args.config, parser) if args.config else {}

    input_path = _merged_option(args, config, "input")
    synth_n = _merged_option(args, config, "synth", int)
    if (input_path is None) == (synth_n is None):
        parser.error("exactly one of --input and --synth is required")

    noise = float(_merged_option(args, config, "noise", float))
    seed = int(_merged_option(args, config, "seed", int))
    test_fraction = float(_merged_option(args, config, "test_fraction", float))
    fmt = _merged_option(args, config, "format")
    if fmt not in ("md", "markdown", "csv", "json"):
        parser.error(f"unknown report format {fmt!r}")
    report_path = _merged_option(args, config, "report")
    scatter_dir = _merged_option(args, config, "scatter_dir")
    models_text = _merged_option(args, config, "models")
    models = _parse_models(models_text, parser) if models_text else ALL_MODEL_KINDS

    try:
        cfg = BenchConfig(
            input_path=input_path,
            synth=None if synth_n is None else SyntheticSpec(n=synth_n, noise_sigma=noise, seed=seed),
            seed=seed,
            test_fraction=test_fraction,
            models=models,
        )
    except ValueError as exc:
        parser.error(str(exc))

    try:
        report = run_benchmark(cfg)
        rendered = render_report(report, fmt)
        if report_path:
            Path(report_path).write_text(rendered, encoding="utf-8")
        else:
            sys.stdout.write(rendered)
        if scatter_dir:
            export_scatter(report, scatter_dir)
    except (InputNotFound, PipelineError, OSError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "describe-synth":
        print(describe_synthetic())
        return 0
    return _cmd_run(args, parser)


if __name__ == "__main__":
    sys.exit(main())
