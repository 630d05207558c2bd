import math
from dataclasses import dataclass

from fock.core import HamiltonianSpec, SpinChannel, monomial
from processing.symmetry import NumberOperatorSpec

CONSERVED_N = NumberOperatorSpec(1, -1, "1/2")


@dataclass(frozen=True)
class JahnTellerParams:
    mu: float
    kappa: float

    def __post_init__(self):
        for name in ("mu", "kappa"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)


def jahn_teller(p: JahnTellerParams) -> HamiltonianSpec:
    """
    Two-level Jahn-Teller system on two boson modes:

    a1+a1 + a2+a2 + 1 + (1/2 + 2 mu) sigma0 + 2 kappa (sigma+ a1 + sigma- a1+ + sigma+ a2+ + sigma- a2)

    Mode 2 enters with the opposite chirality to mode 1, so the conserved
    quantity is n1 - n2 + sigma0/2.
    """
    coupling = 2 * p.kappa
    return (
        monomial(1.0, 1, 1, 0, 0)
        + monomial(1.0, 0, 0, 1, 1)
        + monomial(1.0)
        + monomial(0.5 + 2 * p.mu, channel=SpinChannel.SIGMA0)
        + monomial(coupling, 0, 1, 0, 0, SpinChannel.SIGMA_PLUS)
        + monomial(coupling, 1, 0, 0, 0, SpinChannel.SIGMA_MINUS)
        + monomial(coupling, 0, 0, 1, 0, SpinChannel.SIGMA_PLUS)
        + monomial(coupling, 0, 0, 0, 1, SpinChannel.SIGMA_MINUS)
    )
