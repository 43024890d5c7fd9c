"""
Command-line interface.

    fit      --input PATH [--method upgma|extended|exact|brute] [--format phylip|csv]
             [--output json|newick] [--list-cones] [--strict-cones] [--exact-rational] [--threads T]
    census   [--n 4] [--samples N] [--seed S] [--threads T] [--chunk-size C] [--no-progress]
    witness  --n N [--a A] [--b B]
    probe    --n N [--samples N] [--seed S]
    schema   [--document run|census|witness|probe]

fit accepts --threads for a uniform command line; fitting runs on one thread.

Exit status: 0 success, 1 unexpected failure, 2 parse/usage/missing input, 3 capacity exceeded.
"""
import argparse
import json
import sys
from typing import List, Optional

from io_cli.report import SCHEMAS
from orchestrator import FanAnalysisPipeline, FitPipeline
from utils.error_handling import EXIT_OK, EXIT_PARSE, exit_code_for
from utils.logger import setup_logger

logger = setup_logger(__name__)


def _fit(args) -> int:
    pipeline = FitPipeline(args.method, exact_rational=args.exact_rational, list_cones=args.list_cones,
                           strict_cones=args.strict_cones)
    report = pipeline.run_file(args.input, args.format)
    print(report.newick if args.output == "newick" else report.model_dump_json(indent=2))
    return EXIT_OK


def _census(args) -> int:
    pipeline = FanAnalysisPipeline(threads=args.threads, show_progress=not args.no_progress)
    report = pipeline.census(args.n, samples=args.samples, seed=args.seed, chunk_size=args.chunk_size)
    print(report.model_dump_json(indent=2))
    return EXIT_OK


def _witness(args) -> int:
    print(FanAnalysisPipeline().witness(args.n, args.a, args.b).model_dump_json(indent=2))
    return EXIT_OK


def _probe(args) -> int:
    print(FanAnalysisPipeline().probe(args.n, samples=args.samples, seed=args.seed).model_dump_json(indent=2))
    return EXIT_OK


def _schema(args) -> int:
    print(json.dumps(SCHEMAS[args.document].model_json_schema(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equidistant-lsq", description="Least-squares equidistant tree fitting")
    commands = parser.add_subparsers(dest="command", required=True)

    fit = commands.add_parser("fit", help="fit an equidistant tree to a distance matrix")
    fit.add_argument("--input", required=True, help="PHYLIP or CSV distance matrix")
    fit.add_argument("--method", choices=sorted(FitPipeline.METHODS), default="exact")
    fit.add_argument("--format", choices=["phylip", "csv"], default=None)
    fit.add_argument("--output", choices=["json", "newick"], default="json")
    fit.add_argument("--list-cones", action="store_true", help="attach the projection cone set of the input")
    fit.add_argument("--strict-cones", action="store_true", help="list interior cone memberships only")
    fit.add_argument("--exact-rational", action="store_true", help="solve with exact fractions")
    fit.add_argument("--threads", type=int, default=None, help="accepted like census; fitting is single-threaded")
    fit.set_defaults(handler=_fit)

    census = commands.add_parser("census", help="sample the cells of the projection-cone refinement")
    census.add_argument("--n", type=int, default=4)
    census.add_argument("--samples", type=int, default=None)
    census.add_argument("--seed", type=int, default=None)
    census.add_argument("--threads", type=int, default=None)
    census.add_argument("--chunk-size", type=int, default=None)
    census.add_argument("--no-progress", action="store_true")
    census.set_defaults(handler=_census)

    witness = commands.add_parser("witness", help="strict cone set of the comb witness")
    witness.add_argument("--n", type=int, required=True)
    witness.add_argument("--a", type=float, default=0.0)
    witness.add_argument("--b", type=float, default=1.0)
    witness.set_defaults(handler=_witness)

    probe = commands.add_parser("probe", help="largest strict cone count found by sampling")
    probe.add_argument("--n", type=int, required=True)
    probe.add_argument("--samples", type=int, default=10_000)
    probe.add_argument("--seed", type=int, default=None)
    probe.set_defaults(handler=_probe)

    schema = commands.add_parser("schema", help="print the JSON schema of a report document")
    schema.add_argument("--document", choices=sorted(SCHEMAS), default="run")
    schema.set_defaults(handler=_schema)
    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run the subcommand and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_OK if not exc.code else EXIT_PARSE
    try:
        return args.handler(args)
    except Exception as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
