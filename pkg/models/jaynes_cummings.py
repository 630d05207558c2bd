import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from fock.core import HamiltonianSpec, SpinChannel, monomial
from processing.symmetry import NumberOperatorSpec

logger = logging.getLogger(__name__)

CONSERVED_N = NumberOperatorSpec(1, 1, "1/2")


class AnalyticRangeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ModifiedJCParams:
    omega: float
    omega0: float
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name in ("omega", "omega0", "lambda1", "lambda2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)


def modified_jc(p: ModifiedJCParams) -> HamiltonianSpec:
    """
    Two-mode Jaynes-Cummings Hamiltonian with one atom coupled to both modes:

    w (a1+a1 + a2+a2) + w0/2 sigma0 + l1 (sigma+ a1 + sigma- a1+) + l2 (sigma+ a2 + sigma- a2+)
    """
    return (
        monomial(p.omega, 1, 1, 0, 0)
        + monomial(p.omega, 0, 0, 1, 1)
        + monomial(p.omega0 / 2, channel=SpinChannel.SIGMA0)
        + monomial(p.lambda1, 0, 1, 0, 0, SpinChannel.SIGMA_PLUS)
        + monomial(p.lambda1, 1, 0, 0, 0, SpinChannel.SIGMA_MINUS)
        + monomial(p.lambda2, 0, 0, 0, 1, SpinChannel.SIGMA_PLUS)
        + monomial(p.lambda2, 0, 0, 1, 0, SpinChannel.SIGMA_MINUS)
    )


def jc_analytic_energy(p: ModifiedJCParams, j: int, n: int, sign: int) -> float:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if j < 0:
        raise ValueError(f"j must be nonnegative, got {j}")
    if not 1 <= n <= j + 1:
        warnings.warn(
            f"n={n} lies outside 1..{j + 1}; the value is not a level of sector j={j}",
            AnalyticRangeWarning,
            stacklevel=2,
        )
    discriminant = 4 * n * (p.lambda1**2 + p.lambda2**2) + (p.omega0 - p.omega) ** 2
    if discriminant < 0:
        return math.nan
    return 0.5 * ((2 * j + 1) * p.omega + sign * math.sqrt(discriminant))


def jc_dark_energy(p: ModifiedJCParams, j: int) -> float:
    return (j + 1) * p.omega - p.omega0 / 2


def jc_sector_levels(p: ModifiedJCParams, j: int) -> np.ndarray:
    """All 2j+3 levels of sector j: the paired branches for n = 1..j+1 and the dark level."""
    levels = [jc_analytic_energy(p, j, n, sign) for n in range(1, j + 2) for sign in (1, -1)]
    levels.append(jc_dark_energy(p, j))
    return np.sort(np.array(levels))


def jc_eigenfunction_polynomials(p: ModifiedJCParams, j: int, n: int, sign: int = 1) -> tuple[Polynomial, Polynomial]:
    if not 1 <= n <= j + 1:
        raise ValueError(f"n={n} outside 1..{j + 1} has no polynomial eigenfunction")
    energy = jc_analytic_energy(p, j, n, sign)
    common = Polynomial([p.lambda2, -p.lambda1]) ** (j - n + 1)
    bright = Polynomial([p.lambda1, p.lambda2])
    c1 = 1.0
    c0 = -(jc_dark_energy(p, j) - energy) * c1
    phi1 = c0 * common * bright ** (n - 1)
    phi2 = c1 * common * bright**n
    return phi1, phi2


def jc_eigenfunction(p: ModifiedJCParams, j: int, n: int, x_samples, sign: int = 1) -> tuple[np.ndarray, np.ndarray]:
    phi1, phi2 = jc_eigenfunction_polynomials(p, j, n, sign)
    xs = np.asarray(x_samples, dtype=float)
    return phi1(xs), phi2(xs)


def analytic_records(p: ModifiedJCParams, j: int) -> list[dict]:
    records = [
        {"kind": "paired", "j": j, "n": n, "sign": sign, "energy": jc_analytic_energy(p, j, n, sign)}
        for n in range(1, j + 2)
        for sign in (1, -1)
    ]
    records.append({"kind": "dark", "j": j, "n": None, "sign": None, "energy": jc_dark_energy(p, j)})
    return records
