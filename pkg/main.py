import argparse
import logging
import sys

import jsonschema

from config import DEFAULT_TRUNCATION, DEFAULT_LEVELS, OUTPUT_FORMATS, RunConfig
from processing.algebra import CATALOG
from processing.symmetry import NotConservedError
from run_strategies import EXIT_FAILED, EXIT_USAGE, STRATEGIES

logger = logging.getLogger(__name__)

# command-line flag -> model parameter name
MODEL_FLAGS = {
    "omega": "omega",
    "omega0": "omega0",
    "lambda1": "lambda1",
    "lambda2": "lambda2",
    "mu": "mu",
    "kappa": "kappa",
    "lam": "lambda",
}


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def add_source_arguments(parser: argparse.ArgumentParser):
    source = parser.add_argument_group("Hamiltonian source")
    source.add_argument("-m", "--model", help="Built-in model: jc, jahn-teller or jc-kerr")
    source.add_argument("-s", "--spec-file", help="Path to a Hamiltonian document")
    source.add_argument("-p", "--params-file", help="Path to a JSON record {model, params}")
    source.add_argument("--omega", type=float, help="Mode frequency")
    source.add_argument("--omega0", type=float, help="Level splitting")
    source.add_argument("--lambda1", type=float, help="jc coupling to mode 1")
    source.add_argument("--lambda2", type=float, help="jc coupling to mode 2")
    source.add_argument("--mu", type=float, help="Jahn-Teller level offset")
    source.add_argument("--kappa", type=float, help="Jahn-Teller or jc-kerr coupling")
    source.add_argument("--lambda", dest="lam", type=float, help="Kerr strength")
    source.add_argument("-n", "--number-operator", help="Override N as 's,p,r', rationals allowed")


def add_output_arguments(parser: argparse.ArgumentParser):
    output = parser.add_argument_group("output")
    output.add_argument("-f", "--format", dest="output_format", choices=OUTPUT_FORMATS, default="table")
    output.add_argument("-o", "--output", dest="output_path", help="Write the report here instead of stdout")
    output.add_argument("--tol", type=float, help="Tolerance (default from FOCKFORGE_TOL or built in)")
    output.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    output.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockforge",
        description="Build, reduce and solve two-mode boson and spin-1/2 Hamiltonians.",
        epilog="Sectors of a conserved number operator are reduced to one-variable ODEs and cross-checked against exact diagonalization.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    helps = {
        "build": "Write the canonical Hamiltonian document",
        "check-symmetry": "Solve and check number-operator conservation",
        "sectors": "List the conserved sectors of a truncated basis",
        "spectrum": "Eigenvalues of selected sectors",
        "ode": "Coupled polynomial ODE of selected sectors",
        "verify-algebra": "Check closure of a catalog generator set",
        "compare": "Cross-validate sector spectra three ways",
    }
    for name, text in helps.items():
        sub = commands.add_parser(name, help=text, description=text)
        if name != "verify-algebra":
            add_source_arguments(sub)
        add_output_arguments(sub)
        sub.add_argument("-c", "--cutoff", help="Fock cutoff 'N1,N2' (default 8,8)")
        if name in ("sectors", "spectrum", "ode", "compare"):
            sub.add_argument("--sector", dest="sectors", action="append", help="'j=2' or an N eigenvalue such as '5/2'")
        if name == "spectrum":
            sub.add_argument("--cutoffs", help="Increasing truncations for a convergence scan, e.g. '40,60,80'")
            sub.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION, help="Truncation of infinite sectors")
            sub.add_argument("-k", "--levels", type=int, default=DEFAULT_LEVELS, help="Levels tracked in infinite sectors")
            sub.add_argument("--count", type=int, help="Also report the roots of energy polynomial P_count")
            sub.add_argument("--analytic", action="store_true", help="Compare with the closed-form jc levels")
            sub.add_argument("--progress", action="store_true", help="Progress bar over the scan")
        if name == "ode":
            sub.add_argument("--scale", help="Multiply the ODE through by this rational factor")
        if name == "verify-algebra":
            sub.add_argument("--set", dest="generator_set", required=True, choices=sorted(CATALOG))
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    model_values = {
        key: getattr(args, flag) for flag, key in MODEL_FLAGS.items() if getattr(args, flag, None) is not None
    }
    return RunConfig(
        model=getattr(args, "model", None),
        model_values=model_values,
        spec_file=getattr(args, "spec_file", None),
        params_file=getattr(args, "params_file", None),
        number_operator=getattr(args, "number_operator", None),
        cutoff=args.cutoff,
        cutoffs=getattr(args, "cutoffs", None),
        sectors=getattr(args, "sectors", None),
        output_format=args.output_format,
        tol=args.tol,
        output_path=args.output_path,
        truncation=getattr(args, "truncation", DEFAULT_TRUNCATION),
        count=getattr(args, "count", None),
        levels=getattr(args, "levels", DEFAULT_LEVELS),
        generator_set=getattr(args, "generator_set", None),
        analytic=getattr(args, "analytic", False),
        progress=getattr(args, "progress", False),
        scale=getattr(args, "scale", None),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        config = make_config(args)
        strategy = STRATEGIES[args.command](config)
        exit_code = strategy.run()
        logger.info(f"{args.command} finished with exit code {exit_code}")
        return exit_code
    except NotConservedError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILED
    except (ValueError, FileNotFoundError, jsonschema.ValidationError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
