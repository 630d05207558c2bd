from .algebra_strategy import VerifyAlgebraStrategy
from .build_strategy import BuildStrategy
from .ode_strategy import OdeStrategy
from .spectrum_strategy import CompareStrategy, SpectrumStrategy
from .strategy import EXIT_FAILED, EXIT_OK, EXIT_USAGE, RunStrategy
from .symmetry_strategy import CheckSymmetryStrategy, SectorsStrategy

STRATEGIES = {
    'build': BuildStrategy,
    'check-symmetry': CheckSymmetryStrategy,
    'sectors': SectorsStrategy,
    'spectrum': SpectrumStrategy,
    'ode': OdeStrategy,
    'verify-algebra': VerifyAlgebraStrategy,
    'compare': CompareStrategy,
}

__all__ = [
    'RunStrategy',
    'BuildStrategy',
    'CheckSymmetryStrategy',
    'SectorsStrategy',
    'SpectrumStrategy',
    'OdeStrategy',
    'VerifyAlgebraStrategy',
    'CompareStrategy',
    'STRATEGIES',
    'EXIT_OK',
    'EXIT_FAILED',
    'EXIT_USAGE',
]
