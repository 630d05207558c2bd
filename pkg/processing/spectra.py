import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from tqdm import tqdm

from fock.core import Basis, HamiltonianSpec, SparseOperator, assemble_operator
from fock.document import format_number
from processing.bargmann import SYMMETRY_ATOL, ReducedSector, energy_polynomials, qes_roots, reduce_sector
from processing.symmetry import EmptySectorError, NumberOperatorSpec, SectorLabel, require_conserved

logger = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-8
CSV_COLUMNS = ["sector", "index", "re", "im", "delta", "converged"]


class NonFiniteBlockError(ValueError):
    pass


def sort_spectrum(values) -> np.ndarray:
    values = np.asarray(values)
    order = np.lexsort((np.imag(values), np.real(values)))
    return values[order]


@dataclass
class SpectrumResult:
    sector: SectorLabel | None
    eigenvalues: np.ndarray
    symmetric: bool
    eigenvectors: np.ndarray | None = None
    truncation: int | None = None
    deltas: np.ndarray | None = None
    converged: np.ndarray | None = None
    history: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def real(self) -> np.ndarray:
        return np.real(self.eigenvalues)

    def rows(self) -> list[dict]:
        rows = []
        for i, value in enumerate(self.eigenvalues):
            rows.append(
                {
                    "sector": "" if self.sector is None else str(self.sector),
                    "index": i,
                    "re": float(np.real(value)),
                    "im": float(np.imag(value)),
                    "delta": None if self.deltas is None else float(self.deltas[i]),
                    "converged": None if self.converged is None else bool(self.converged[i]),
                }
            )
        return rows

    def to_dict(self) -> dict:
        return {
            "sector": None if self.sector is None else str(self.sector),
            "symmetric": self.symmetric,
            "truncation": self.truncation,
            "eigenvalues": self.rows(),
            "history": {str(k): [float(np.real(v)) for v in values] for k, values in self.history.items()},
        }


def spectrum_csv(results: list[SpectrumResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for result in results:
        for row in result.rows():
            writer.writerow(
                [
                    row["sector"],
                    row["index"],
                    format_number(row["re"]),
                    format_number(row["im"]),
                    "" if row["delta"] is None else format_number(row["delta"]),
                    "" if row["converged"] is None else str(row["converged"]).lower(),
                ]
            )
    return buffer.getvalue()


def diagonalize(block, sector: SectorLabel | None = None, vectors: bool = False) -> SpectrumResult:
    """
    All eigenvalues of a dense block, sorted by real then imaginary part.

    Diagonal blocks are read off directly, symmetric blocks go through eigh and
    everything else through the general eigensolver.
    """
    truncation = None
    if isinstance(block, ReducedSector):
        sector = sector if sector is not None else block.label
        truncation = block.dimension if block.truncated else None
        matrix = block.matrix
    elif isinstance(block, SparseOperator):
        matrix = block.toarray()
    else:
        matrix = np.asarray(block, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Block must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteBlockError(f"Block of sector {sector} has non-finite entries")

    symmetric = bool(np.allclose(matrix, matrix.T, rtol=0.0, atol=SYMMETRY_ATOL))
    if not np.any(matrix - np.diag(np.diag(matrix))):
        values = np.diag(matrix).astype(float)
        eigenvectors = np.eye(matrix.shape[0])
    elif symmetric:
        values, eigenvectors = scipy.linalg.eigh(0.5 * (matrix + matrix.T))
    else:
        values, eigenvectors = scipy.linalg.eig(matrix)
    order = np.lexsort((np.imag(values), np.real(values)))
    return SpectrumResult(
        sector=sector,
        eigenvalues=values[order],
        symmetric=symmetric,
        eigenvectors=eigenvectors[:, order] if vectors else None,
        truncation=truncation,
    )


def convergence_scan(
    spec: HamiltonianSpec,
    n: NumberOperatorSpec,
    sector: SectorLabel,
    cutoffs: list[int],
    k: int,
    tol: float = CONVERGENCE_TOL,
    progress: bool = False,
) -> SpectrumResult:
    if len(cutoffs) < 2:
        raise ValueError("A convergence scan needs at least two truncations")
    if list(cutoffs) != sorted(cutoffs):
        raise ValueError(f"Truncations must increase, got {cutoffs}")
    history = {}
    last = None
    for cutoff in tqdm(cutoffs, desc=f"sector {sector}", disable=not progress):
        reduced = reduce_sector(spec, n, sector, truncation=cutoff)
        result = diagonalize(reduced)
        history[cutoff] = result.eigenvalues[:k]
        last = result
    lowest = min(len(v) for v in history.values())
    final = history[cutoffs[-1]][:lowest]
    previous = history[cutoffs[-2]][:lowest]
    deltas = np.abs(final - previous)
    converged = deltas < tol
    logger.info(f"Sector {sector}: {int(np.sum(converged))}/{lowest} of the lowest levels converged below {tol}")
    return SpectrumResult(
        sector=sector,
        eigenvalues=final,
        symmetric=last.symmetric,
        truncation=cutoffs[-1],
        deltas=deltas,
        converged=converged,
        history=history,
    )


def sector_ordinals(
    basis: Basis, n: NumberOperatorSpec, sector: SectorLabel, spec: HamiltonianSpec | None = None
) -> list[int]:
    """
    Ordinals of the sector inside the basis. Given the Hamiltonian, modes it never touches
    and N does not weigh are spectators and stay in their vacuum.
    """
    frozen1 = spec is not None and n.s == 0 and not spec.touches_mode(1)
    frozen2 = spec is not None and n.p == 0 and not spec.touches_mode(2)
    return [
        i
        for i, state in enumerate(basis.states)
        if n.eigenvalue(state) == sector.eigenvalue
        and not (frozen1 and state.n1)
        and not (frozen2 and state.n2)
    ]


def sector_spectrum_full(
    spec: HamiltonianSpec,
    n: NumberOperatorSpec,
    sector: SectorLabel,
    cutoff: tuple[int, int],
    operator: SparseOperator | None = None,
) -> SpectrumResult:
    basis = Basis(cutoff) if operator is None else operator.basis
    ordinals = sector_ordinals(basis, n, sector, spec)
    if not ordinals:
        raise EmptySectorError(f"Sector {sector} has no states inside cutoff {basis.cutoff}")
    operator = assemble_operator(spec, basis) if operator is None else operator
    return diagonalize(operator.restrict(ordinals), sector=sector)


@dataclass
class CrossValidation:
    sector: SectorLabel
    full: np.ndarray
    reduced: np.ndarray
    roots: np.ndarray
    contained: bool
    tol: float

    @property
    def full_vs_reduced(self) -> float:
        return _max_gap(self.full, self.reduced)

    @property
    def reduced_vs_roots(self) -> float:
        return _max_gap(self.reduced, self.roots)

    @property
    def passed(self) -> bool:
        return self.contained and max(self.full_vs_reduced, self.reduced_vs_roots) < self.tol

    def to_dict(self) -> dict:
        return {
            "sector": str(self.sector),
            "contained": self.contained,
            "full_vs_reduced": self.full_vs_reduced,
            "reduced_vs_roots": self.reduced_vs_roots,
            "passed": self.passed,
            "eigenvalues": [float(np.real(v)) for v in self.reduced],
        }


def _max_gap(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) != len(b):
        return float("inf")
    if len(a) == 0:
        return 0.0
    return float(np.max(np.abs(sort_spectrum(a) - sort_spectrum(b))))


def cross_validate(
    spec: HamiltonianSpec,
    n: NumberOperatorSpec,
    sector: SectorLabel,
    cutoff: tuple[int, int],
    tol: float = 1e-9,
    operator: SparseOperator | None = None,
) -> CrossValidation:
    """
    Compare the sector spectrum three ways: the block of the full truncated matrix,
    the reduced one-variable block and the roots of its top energy polynomial.
    """
    require_conserved(spec, n)
    reduced = reduce_sector(spec, n, sector)
    if reduced.truncated:
        raise ValueError(f"Sector {sector} is infinite; cross-validation needs a finite sector")
    basis = Basis(cutoff) if operator is None else operator.basis
    contained = len(sector_ordinals(basis, n, sector, spec)) == reduced.dimension
    full = sector_spectrum_full(spec, n, sector, cutoff, operator).eigenvalues
    reduced_values = diagonalize(reduced).eigenvalues
    roots = qes_roots(energy_polynomials(reduced))
    if not contained:
        logger.warning(f"Sector {sector} is not fully inside cutoff {basis.cutoff}")
    check = CrossValidation(sector, full, reduced_values, roots, contained, tol)
    logger.debug(f"Cross-validation of sector {sector}: {check.to_dict()}")
    return check
