import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from fock.core import (
    Basis,
    EmptyInteriorError,
    FockState,
    HamiltonianSpec,
    MonomialTerm,
    SpinChannel,
    assemble_operator,
    commutator,
    interior_block,
    monomial,
)

logger = logging.getLogger(__name__)


class NotConservedError(ValueError):
    pass


class EmptySectorError(ValueError):
    pass


def _spin_shift(channel: SpinChannel) -> int:
    if channel is SpinChannel.SIGMA_PLUS:
        return 2
    if channel is SpinChannel.SIGMA_MINUS:
        return -2
    return 0


@dataclass(frozen=True)
class NumberOperatorSpec:
    """
    N = s a1+a1 + p a2+a2 + r sigma0 with exact rational weights.

    The overall sign is fixed so the first nonzero weight is positive; N and -N
    define the same sectors.
    """

    s: Fraction
    p: Fraction
    r: Fraction

    def __post_init__(self):
        weights = [Fraction(w) for w in (self.s, self.p, self.r)]
        if all(w == 0 for w in weights):
            raise ValueError("Number operator weights (s, p, r) must not all vanish")
        leading = next(w for w in weights if w != 0)
        if leading < 0:
            weights = [-w for w in weights]
        for name, w in zip(("s", "p", "r"), weights):
            object.__setattr__(self, name, w)

    @classmethod
    def parse(cls, text: str) -> "NumberOperatorSpec":
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"Expected 's,p,r', got '{text}'")
        try:
            return cls(*(Fraction(part) for part in parts))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Malformed number operator '{text}': {e}") from e

    @property
    def weights(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.s, self.p, self.r

    def eigenvalue(self, state: FockState) -> Fraction:
        return self.s * state.n1 + self.p * state.n2 + self.r * state.spin.sign

    def as_spec(self) -> HamiltonianSpec:
        return (
            monomial(float(self.s), 1, 1, 0, 0)
            + monomial(float(self.p), 0, 0, 1, 1)
            + monomial(float(self.r), channel=SpinChannel.SIGMA0)
        )

    def __str__(self) -> str:
        return f"({self.s}, {self.p}, {self.r})"

    def to_dict(self) -> dict:
        return {"s": str(self.s), "p": str(self.p), "r": str(self.r)}


@dataclass(frozen=True, order=True)
class SectorLabel:
    eigenvalue: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eigenvalue", Fraction(self.eigenvalue))

    def __str__(self) -> str:
        return str(self.eigenvalue)

    @classmethod
    def parse(cls, text: str) -> "SectorLabel":
        return cls(Fraction(text.strip()))


@dataclass(frozen=True)
class TermResidual:
    term: MonomialTerm
    residual: Fraction

    def to_dict(self) -> dict:
        return {
            "channel": self.term.channel.value,
            "exponents": list(self.term.exponents),
            "coefficient": self.term.coefficient,
            "residual": str(self.residual),
        }


@dataclass(frozen=True)
class ConservationReport:
    number_operator: NumberOperatorSpec
    records: tuple[TermResidual, ...]

    @property
    def conserved(self) -> bool:
        return all(record.residual == 0 for record in self.records)

    def violations(self) -> list[TermResidual]:
        return [record for record in self.records if record.residual != 0]

    def to_dict(self) -> dict:
        return {
            "number_operator": self.number_operator.to_dict(),
            "conserved": self.conserved,
            "terms": [record.to_dict() for record in self.records],
        }


def term_residual(term: MonomialTerm, n: NumberOperatorSpec) -> Fraction:
    """Charge a single term carries under N: [N, T] = residual * T."""
    v1, v2, v3, v4 = term.exponents
    return n.s * (v1 - v2) + n.p * (v3 - v4) + n.r * _spin_shift(term.channel)


def check_conservation(spec: HamiltonianSpec, n: NumberOperatorSpec) -> ConservationReport:
    records = tuple(TermResidual(term, term_residual(term, n)) for term in spec.terms)
    report = ConservationReport(n, records)
    logger.debug(f"Conservation of N={n}: {len(report.violations())} of {len(records)} terms violate")
    return report


def solve_conservation(spec: HamiltonianSpec) -> list[NumberOperatorSpec]:
    """
    Basis of every (s, p, r) whose N commutes with the Hamiltonian.

    Each term contributes one homogeneous linear equation in (s, p, r); the
    rational nullspace of that system is returned with each vector scaled so its
    first nonzero entry is 1. An empty list means only N = 0 commutes.
    """
    if spec.is_empty:
        raise ValueError("empty Hamiltonian")
    rows = [
        [t.exponents[0] - t.exponents[1], t.exponents[2] - t.exponents[3], _spin_shift(t.channel)]
        for t in spec.terms
    ]
    nullspace = sympy.Matrix(rows).nullspace()
    if len(nullspace) > 1:
        # row-reduced so the generators do not depend on sympy's pivot choice
        reduced, _ = sympy.Matrix.hstack(*nullspace).T.rref()
        nullspace = [reduced.row(i) for i in range(reduced.rows) if any(v != 0 for v in reduced.row(i))]
    solutions = []
    for vector in nullspace:
        entries = [sympy.Rational(v) for v in vector]
        leading = next(v for v in entries if v != 0)
        scaled = [v / leading for v in entries]
        solutions.append(NumberOperatorSpec(*(Fraction(int(v.p), int(v.q)) for v in scaled)))
    logger.info(f"Conserved number operators: {[str(s) for s in solutions] or 'none'}")
    return solutions


def sector_decompose(basis: Basis, n: NumberOperatorSpec) -> dict[SectorLabel, tuple[FockState, ...]]:
    sectors: dict[SectorLabel, list[FockState]] = {}
    for state in basis.states:
        sectors.setdefault(SectorLabel(n.eigenvalue(state)), []).append(state)
    return {label: tuple(sectors[label]) for label in sorted(sectors)}


def sector_for_j(n: NumberOperatorSpec, j) -> SectorLabel:
    """
    Label of the sector whose spin-up component holds z1^j.

    With j = n1 + (p/s) n2 for the spin-up part, the N eigenvalue is s*j + r
    (p*j + r when s vanishes).
    """
    j = Fraction(j)
    weight = n.s if n.s != 0 else n.p
    return SectorLabel(weight * j + n.r)


def j_for_sector(n: NumberOperatorSpec, sector: SectorLabel) -> Fraction:
    weight = n.s if n.s != 0 else n.p
    if weight == 0:
        raise ValueError(f"N={n} has no boson weight; sectors carry no j")
    return (sector.eigenvalue - n.r) / weight


def numeric_conservation_check(spec: HamiltonianSpec, n: NumberOperatorSpec, cutoff: tuple[int, int]) -> float:
    if spec.is_empty:
        return 0.0
    basis = Basis(cutoff)
    degree = spec.max_degree()
    h = assemble_operator(spec, basis)
    number = assemble_operator(n.as_spec(), basis)
    try:
        block = interior_block(commutator(number, h), degree)
    except EmptyInteriorError:
        logger.error(f"Cutoff {cutoff} leaves no interior for degree {degree}")
        raise
    return float(np.max(np.abs(block))) if block.size else 0.0


def require_conserved(spec: HamiltonianSpec, n: NumberOperatorSpec):
    report = check_conservation(spec, n)
    if not report.conserved:
        worst = ", ".join(str(r.term) for r in report.violations())
        raise NotConservedError(f"Hamiltonian does not conserve N={n}: {worst}")
    return report
