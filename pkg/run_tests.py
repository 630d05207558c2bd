#!/usr/bin/env python3
"""
Test runner for fockforge.

Runs the pytest suites for the Fock-space core, the symmetry and sector
machinery, the one-variable reduction, the spectra, the algebra catalog and the
command-line strategies.

Usage:
    python run_tests.py [options]

Options:
    --verbose, -v: Verbose output
    --coverage, -c: Run with coverage reporting
    --unit-only: Run only unit tests
    --fast: Skip tests marked slow
    --help, -h: Show this help message
"""

import argparse
import subprocess
import sys


def run_command(command, description=""):
    """Run a shell command and return the result"""
    print(f"Running: {description or command}")
    result = subprocess.run(command, shell=True, capture_output=True, text=True)

    if result.stdout:
        print(result.stdout)
    if result.stderr:
        print(result.stderr, file=sys.stderr)

    return result.returncode == 0


def main():
    parser = argparse.ArgumentParser(description="Run the fockforge test suites")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose output")
    parser.add_argument("--coverage", "-c", action="store_true", help="Run with coverage reporting")
    parser.add_argument("--unit-only", action="store_true", help="Run only unit tests")
    parser.add_argument("--fast", action="store_true", help="Skip tests marked slow")

    args = parser.parse_args()

    pytest_cmd = "uv run pytest"
    pytest_cmd += " -v" if args.verbose else " -q"

    if args.coverage:
        pytest_cmd += (
            " --cov=fock --cov=processing --cov=models --cov=sources"
            " --cov=config --cov=run_strategies --cov-report=term-missing"
        )

    markers = []
    if args.unit_only:
        markers.append("unit")
    if args.fast:
        markers.append("not slow")
    if markers:
        pytest_cmd += f' -m "{" and ".join(markers)}"'
    pytest_cmd += " tests/"

    print("=" * 80)
    print("FOCKFORGE TESTS")
    print("=" * 80)

    success = run_command(pytest_cmd, "Running pytest tests")

    print("=" * 80)
    print("ALL TESTS PASSED" if success else "SOME TESTS FAILED")
    print("=" * 80)
    return 0 if success else 1


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
