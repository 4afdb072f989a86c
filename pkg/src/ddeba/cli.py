"""Command-line front end: ``estimate``, ``evaluate``, ``compare`` and ``matrix``.

Exit codes: 0 success, 2 input or validation error, 3 computation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bundled, report
from .dataset import Dataset, load_schema, parse_csv, parse_query_csv, record_from_mapping
from .dissimilarity import distance_matrix
from .errors import EstimationError, ValidationError
from .estimator import EstimationConfig, predict
from .evaluation import compare, loo_evaluate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", help="CSV file of historical projects")
    p.add_argument("--schema", help="schema sidecar file")
    p.add_argument("--bundled", choices=sorted(bundled.REGISTRY),
                   help="use a registered dataset instead of --dataset/--schema")
    p.add_argument("--missing-token", default="?", help="token marking missing cells (default '?')")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")


def _add_method_args(p: argparse.ArgumentParser, methods=("fixed-k", "loocv", "dd")) -> None:
    p.add_argument("--method", choices=methods, default="dd")
    p.add_argument("--k", type=int, help="neighbour count for --method fixed-k")


def _add_search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kmax", type=int, help="largest k searched (default min(10, n-2))")
    p.add_argument("--statistic", choices=("mean", "median"), default="mean")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddeba",
        description="Effort estimation by analogy with LOOCV or distance-distribution k selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate the effort of one new project")
    _add_data_args(p)
    _add_method_args(p)
    _add_search_args(p)
    p.add_argument("--query", help="single-row CSV describing the new project")
    p.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                   help="feature value of the new project (repeatable)")

    p = sub.add_parser("evaluate", help="leave-one-out accuracy of one method")
    _add_data_args(p)
    _add_method_args(p)
    _add_search_args(p)

    p = sub.add_parser("compare", help="leave-one-out comparison of LOOCV-EbA and DD-EbA")
    _add_data_args(p)
    _add_search_args(p)

    p = sub.add_parser("matrix", help="dump the pairwise distance matrix as CSV")
    _add_data_args(p)
    return parser


def _load(args) -> tuple[Dataset, str, str]:
    if args.bundled:
        if args.dataset or args.schema:
            raise ValidationError("--bundled cannot be combined with --dataset/--schema")
        try:
            csv_path, schema_path = bundled.locate(args.bundled)
        except FileNotFoundError as exc:
            raise ValidationError(str(exc)) from None
        dataset = bundled.load(args.bundled, args.missing_token)
        return dataset, str(csv_path), str(schema_path)
    if not args.dataset or not args.schema:
        raise ValidationError("--dataset and --schema are required (or use --bundled)")
    schema = load_schema(args.schema)
    return parse_csv(args.dataset, schema, args.missing_token), args.dataset, args.schema


def _config(args, method: str) -> EstimationConfig:
    return EstimationConfig(method, k=getattr(args, "k", None), k_max=args.kmax,
                            statistic=args.statistic)


def _manifest(args, dataset_path: str, schema_path: str, method: str | None) -> dict:
    return report.manifest(
        command=args.command,
        dataset=dataset_path,
        schema=schema_path,
        bundled=args.bundled,
        method=method,
        k=getattr(args, "k", None),
        k_max=getattr(args, "kmax", None),
        statistic=getattr(args, "statistic", None),
        missing_token=args.missing_token,
        format=args.format,
        out=args.out,
    )


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_sets(pairs: list[str]) -> dict[str, str]:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ValidationError(f"--set expects NAME=VALUE, got {item!r}")
        name, value = item.split("=", 1)
        out[name.strip()] = value
    return out


def cmd_estimate(args) -> int:
    dataset, dpath, spath = _load(args)
    if args.query and args.set:
        raise ValidationError("use either --query or --set, not both")
    if args.query:
        query = parse_query_csv(args.query, dataset.schema, args.missing_token)
    elif args.set:
        query = record_from_mapping(dataset.schema, _parse_sets(args.set), args.missing_token)
    else:
        raise ValidationError("a query is required (--query FILE or --set NAME=VALUE)")
    config = _config(args, args.method)
    pred = predict(dataset, query, config)
    if args.format == "json":
        doc = {"manifest": _manifest(args, dpath, spath, config.method),
               "prediction": report.prediction_dict(pred, dataset.efforts)}
        _emit(args, report.dumps(doc))
    else:
        _emit(args, report.prediction_text(pred, dataset.efforts))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    dataset, dpath, spath = _load(args)
    config = _config(args, args.method)
    result = loo_evaluate(dataset, config)
    if args.format == "json":
        doc = {"manifest": _manifest(args, dpath, spath, config.method),
               "evaluation": report.evaluation_dict(result),
               "timing": report.timing_block(**{config.method.replace("-", "_"): result.wall_time})}
        _emit(args, report.dumps(doc))
    else:
        _emit(args, report.evaluation_text(result))
    return EXIT_OK


def cmd_compare(args) -> int:
    dataset, dpath, spath = _load(args)
    _config(args, "loocv")
    comp = compare(dataset, k_max=args.kmax, statistic=args.statistic)
    entry = bundled.REGISTRY.get(args.bundled) if args.bundled else None
    reference = entry.reference if entry and entry.reference else None
    ref_p = entry.reference_p if entry else None
    if args.format == "json":
        doc = {"manifest": _manifest(args, dpath, spath, "compare"),
               "comparison": report.comparison_dict(comp, reference, ref_p),
               "timing": report.timing_block(loocv=comp.loocv.wall_time, dd=comp.dd.wall_time)}
        _emit(args, report.dumps(doc))
    else:
        name = args.bundled or Path(dpath).stem
        _emit(args, report.comparison_text(comp, name, reference, ref_p))
    return EXIT_OK


def cmd_matrix(args) -> int:
    dataset, _, _ = _load(args)
    matrix = distance_matrix(dataset)
    if args.out:
        matrix.to_csv(args.out)
    else:
        import numpy as np
        np.savetxt(sys.stdout, matrix.entries, fmt="%.17g", delimiter=",")
    return EXIT_OK


COMMANDS = {
    "estimate": cmd_estimate,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "matrix": cmd_matrix,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EstimationError as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
