from .algebra import ClosureReport, GeneratorSet, catalog, span_residual, superbracket, verify_closure
from .bargmann import (
    EnergyPolynomialSequence,
    PolyMatrixODE,
    ReducedSector,
    energy_polynomials,
    extract_ode,
    qes_roots,
    reduce_sector,
)
from .spectra import SpectrumResult, convergence_scan, cross_validate, diagonalize
from .symmetry import (
    ConservationReport,
    NumberOperatorSpec,
    SectorLabel,
    check_conservation,
    j_for_sector,
    numeric_conservation_check,
    sector_decompose,
    sector_for_j,
    solve_conservation,
)

__all__ = [
    'ClosureReport',
    'GeneratorSet',
    'catalog',
    'span_residual',
    'superbracket',
    'verify_closure',
    'EnergyPolynomialSequence',
    'PolyMatrixODE',
    'ReducedSector',
    'energy_polynomials',
    'extract_ode',
    'qes_roots',
    'reduce_sector',
    'SpectrumResult',
    'convergence_scan',
    'cross_validate',
    'diagonalize',
    'ConservationReport',
    'NumberOperatorSpec',
    'SectorLabel',
    'check_conservation',
    'j_for_sector',
    'numeric_conservation_check',
    'sector_decompose',
    'sector_for_j',
    'solve_conservation',
]
