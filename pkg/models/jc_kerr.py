import logging
import math
from dataclasses import dataclass

import numpy as np

from fock.core import Basis, HamiltonianSpec, SpinChannel, assemble_operator, interior_mask, monomial
from processing.algebra import catalog, evaluate_expression
from processing.symmetry import NumberOperatorSpec

logger = logging.getLogger(__name__)

CONSERVED_N = NumberOperatorSpec(1, 0, "1/2")

# (2N - Y0) and its square dominate the interior requirement
_DEFORMED_DEGREE = (4, 0)


@dataclass(frozen=True)
class JCKerrParams:
    omega: float
    omega0: float
    kappa: float
    lam: float

    def __post_init__(self):
        for name in ("omega", "omega0", "kappa", "lam"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class DeformedComparison:
    max_difference: float
    constant_shift: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "max_difference": self.max_difference,
            "constant_shift": self.constant_shift,
            "residual": self.residual,
        }


def jc_kerr(p: JCKerrParams) -> HamiltonianSpec:
    """
    Single-mode Jaynes-Cummings model with a Kerr medium, embedded on mode 1.

    The Kerr term (a+a)^2 is stored normal ordered as (a+)^2 a^2 + a+a.
    """
    return (
        monomial(p.omega + p.lam, 1, 1, 0, 0)
        + monomial(p.lam, 2, 2, 0, 0)
        + monomial(p.omega0 / 2, channel=SpinChannel.SIGMA0)
        + monomial(p.kappa, 0, 1, 0, 0, SpinChannel.SIGMA_PLUS)
        + monomial(p.kappa, 1, 0, 0, 0, SpinChannel.SIGMA_MINUS)
    )


def deformed_expression(p: JCKerrParams) -> list[tuple[float, tuple[str, ...]]]:
    """
    The Kerr Hamiltonian written with the deformed su(2) generators:

    w (2N - Y0) + w0 (Y0 - N) + kappa (Y+ + Y-) + lam (2N - Y0)^2
    """
    return [
        (2 * p.omega - p.omega0, ("N",)),
        (p.omega0 - p.omega, ("Y0",)),
        (p.kappa, ("Y+",)),
        (p.kappa, ("Y-",)),
        (4 * p.lam, ("N", "N")),
        (-2 * p.lam, ("N", "Y0")),
        (-2 * p.lam, ("Y0", "N")),
        (p.lam, ("Y0", "Y0")),
    ]


def jc_kerr_deformed_form(p: JCKerrParams, cutoff: tuple[int, int]) -> DeformedComparison:
    basis = Basis(cutoff)
    generators = catalog("deformed_su2").operators(basis)
    deformed = evaluate_expression(deformed_expression(p), generators, basis)
    direct = assemble_operator(jc_kerr(p), basis)
    block = (deformed - direct).restrict(interior_mask(basis, _DEFORMED_DEGREE))
    shift = float(np.mean(np.diag(block))) if block.size else 0.0
    comparison = DeformedComparison(
        max_difference=float(np.max(np.abs(block))) if block.size else 0.0,
        constant_shift=shift,
        residual=float(np.max(np.abs(block - shift * np.eye(block.shape[0])))) if block.size else 0.0,
    )
    logger.info(f"Deformed form vs direct Kerr Hamiltonian: {comparison}")
    return comparison
