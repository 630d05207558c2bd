from .jahn_teller import JahnTellerParams, jahn_teller
from .jaynes_cummings import (
    AnalyticRangeWarning,
    ModifiedJCParams,
    analytic_records,
    jc_analytic_energy,
    jc_dark_energy,
    jc_eigenfunction,
    jc_eigenfunction_polynomials,
    jc_sector_levels,
    modified_jc,
)
from .jc_kerr import DeformedComparison, JCKerrParams, jc_kerr, jc_kerr_deformed_form
from .registry import MODELS, ModelEntry, get_model

__all__ = [
    'JahnTellerParams',
    'jahn_teller',
    'AnalyticRangeWarning',
    'ModifiedJCParams',
    'analytic_records',
    'jc_analytic_energy',
    'jc_dark_energy',
    'jc_eigenfunction',
    'jc_eigenfunction_polynomials',
    'jc_sector_levels',
    'modified_jc',
    'DeformedComparison',
    'JCKerrParams',
    'jc_kerr',
    'jc_kerr_deformed_form',
    'MODELS',
    'ModelEntry',
    'get_model',
]
