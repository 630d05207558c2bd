import logging
import os
import sys
from pathlib import Path

from fock.core import HamiltonianSpec
from fock.document import dumps
from processing.symmetry import NumberOperatorSpec, SectorLabel, sector_for_j
from sources.builtin_model import BuiltinModel
from sources.parameter_file import ModelParameterFile
from sources.spec_file import SpecFile

logger = logging.getLogger(__name__)

TOLERANCE_ENV = "FOCKFORGE_TOL"
DEFAULT_TOL = 1e-10
DEFAULT_CUTOFF = (8, 8)
DEFAULT_TRUNCATION = 40
DEFAULT_LEVELS = 5
OUTPUT_FORMATS = ("table", "csv", "structured")


def parse_cutoff(text: str) -> tuple[int, int]:
    parts = [part.strip() for part in str(text).split(",")]
    if len(parts) == 1:
        parts = parts * 2
    try:
        cutoff = tuple(int(part) for part in parts)
    except ValueError as e:
        raise ValueError(f"Malformed cutoff '{text}', expected 'N1,N2'") from e
    if len(cutoff) != 2 or any(c < 0 for c in cutoff):
        raise ValueError(f"Malformed cutoff '{text}', expected two nonnegative integers")
    return cutoff


def parse_cutoffs(text: str) -> list[int]:
    try:
        cutoffs = [int(part.strip()) for part in str(text).split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"Malformed cutoff list '{text}'") from e
    if not cutoffs or any(c <= 0 for c in cutoffs):
        raise ValueError(f"Cutoffs must be positive integers, got '{text}'")
    return cutoffs


def resolve_tolerance(explicit: float | None = None, default: float = DEFAULT_TOL) -> float:
    """Explicit value, then the FOCKFORGE_TOL environment variable, then the default."""
    if explicit is not None:
        value = float(explicit)
    elif os.environ.get(TOLERANCE_ENV):
        raw = os.environ[TOLERANCE_ENV]
        try:
            value = float(raw)
        except ValueError as e:
            raise ValueError(f"{TOLERANCE_ENV}='{raw}' is not a number") from e
    else:
        value = default
    if not value > 0:
        raise ValueError(f"Tolerance must be positive, got {value}")
    return value


class RunConfig:
    def __init__(
        self,
        model: str | None = None,
        model_values: dict | None = None,
        spec_file: str | Path | None = None,
        params_file: str | Path | None = None,
        number_operator: str | None = None,
        cutoff: str | tuple[int, int] | None = None,
        cutoffs: str | list[int] | None = None,
        sectors: list[str] | None = None,
        output_format: str = "table",
        tol: float | None = None,
        output_path: str | Path | None = None,
        truncation: int = DEFAULT_TRUNCATION,
        count: int | None = None,
        levels: int = DEFAULT_LEVELS,
        generator_set: str | None = None,
        analytic: bool = False,
        progress: bool = False,
        scale: str | None = None,
    ):
        # Hamiltonian source
        self.source = self.set_source(model, model_values or {}, spec_file, params_file)

        # Numerical setup
        self.number_operator = NumberOperatorSpec.parse(number_operator) if number_operator else None
        if cutoff is None:
            self.cutoff = DEFAULT_CUTOFF
        elif isinstance(cutoff, str):
            self.cutoff = parse_cutoff(cutoff)
        else:
            self.cutoff = tuple(cutoff)
        if cutoffs is None or isinstance(cutoffs, list):
            self.cutoffs = cutoffs
        else:
            self.cutoffs = parse_cutoffs(cutoffs)
        self.sectors = list(sectors or [])
        if truncation <= 0:
            raise ValueError(f"Truncation must be positive, got {truncation}")
        self.truncation = truncation
        self.count = count
        if levels <= 0:
            raise ValueError(f"Number of levels must be positive, got {levels}")
        self.levels = levels
        self.explicit_tol = tol
        self.tol = resolve_tolerance(tol)
        self.generator_set = generator_set
        self.scale = scale

        # Output
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format '{output_format}', expected one of {OUTPUT_FORMATS}")
        self.output_format = output_format
        self.output_path = Path(output_path).expanduser() if output_path else None
        self.analytic = analytic
        self.progress = progress

    def set_source(self, model=None, model_values=None, spec_file=None, params_file=None):
        """
        Picks where the Hamiltonian comes from.

        - SpecFile: a canonical Hamiltonian document on disk
        - BuiltinModel: one of the named models with parameters from the command line
        - ModelParameterFile: a named model with parameters read from a JSON record
        """
        chosen = [option for option in (model, spec_file, params_file) if option]
        if len(chosen) > 1:
            raise ValueError("Give exactly one of --model, --spec-file, --params-file")
        if spec_file:
            return SpecFile(spec_file)
        if params_file:
            return ModelParameterFile(params_file)
        if model:
            return BuiltinModel(model, model_values or {})
        return None

    def load_spec(self) -> HamiltonianSpec:
        if self.source is None:
            raise ValueError("No Hamiltonian given; use --model, --spec-file or --params-file")
        spec = self.source.load()
        if spec.is_empty:
            raise ValueError("empty Hamiltonian")
        logger.info(f"Loaded Hamiltonian from {self.source.describe()}: {len(spec)} terms")
        return spec

    def tolerance_for(self, default: float) -> float:
        return resolve_tolerance(self.explicit_tol, default)

    @property
    def model(self):
        return getattr(self.source, "model", None)

    def resolve_sectors(self, n: NumberOperatorSpec) -> list[SectorLabel]:
        """Sector selectors are either 'j=<value>' or a bare N eigenvalue such as '5/2'."""
        labels = []
        for selector in self.sectors:
            text = selector.strip()
            try:
                if text.startswith("j="):
                    labels.append(sector_for_j(n, text[2:]))
                else:
                    labels.append(SectorLabel.parse(text))
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"Malformed sector selector '{selector}'") from e
        return labels

    @property
    def output_dir(self) -> Path:
        return self.output_path.parent if self.output_path else Path.cwd()

    def emit(self, text: str):
        """Write a report to --output, or to stdout"""
        if self.output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return None
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.output_path, "w", encoding="utf-8") as file:
                file.write(text)
            logger.info(f"Report saved to {self.output_path}")
            return self.output_path
        except Exception as e:
            logger.error(f"Error saving report: {e}")
            raise

    def save_document(self, filename: str, data: dict) -> Path:
        """Save a structured document next to the report"""
        file_path = self.output_dir / filename
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, "w", encoding="utf-8") as file:
                file.write(dumps(data))
            logger.info(f"Document saved to {file_path}")
            return file_path
        except Exception as e:
            logger.error(f"Error saving document: {e}")
            raise
