import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse import identity as sparse_identity

logger = logging.getLogger(__name__)


class BasisMismatchError(ValueError):
    pass


class EmptyInteriorError(ValueError):
    pass


class SpinChannel(Enum):
    IDENTITY = "identity"
    SIGMA0 = "sigma0"
    SIGMA_PLUS = "sigma_plus"
    SIGMA_MINUS = "sigma_minus"

    @property
    def order(self) -> int:
        return list(SpinChannel).index(self)

    def adjoint(self) -> "SpinChannel":
        if self is SpinChannel.SIGMA_PLUS:
            return SpinChannel.SIGMA_MINUS
        if self is SpinChannel.SIGMA_MINUS:
            return SpinChannel.SIGMA_PLUS
        return self


class Spin(IntEnum):
    UP = 0
    DOWN = 1

    @property
    def sign(self) -> int:
        return 1 if self is Spin.UP else -1


@dataclass(frozen=True, order=True)
class FockState:
    n1: int
    n2: int
    spin: Spin

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError(f"Occupations must be nonnegative, got ({self.n1}, {self.n2})")

    def __str__(self) -> str:
        arrow = "up" if self.spin is Spin.UP else "down"
        return f"|{self.n1},{self.n2},{arrow}>"


@dataclass(frozen=True)
class MonomialTerm:
    """
    One coefficient times (a1+)^v1 (a1)^v2 (a2+)^v3 (a2)^v4 times a spin channel.

    Creation stands left of annihilation within each mode and mode 1 left of mode 2.
    """

    coefficient: float
    exponents: tuple[int, int, int, int]
    channel: SpinChannel = SpinChannel.IDENTITY

    def __post_init__(self):
        exponents = tuple(int(v) for v in self.exponents)
        if len(exponents) != 4 or any(v < 0 for v in exponents):
            raise ValueError(f"Exponents must be four nonnegative integers, got {self.exponents}")
        if not math.isfinite(self.coefficient):
            raise ValueError(f"Coefficient must be finite, got {self.coefficient}")
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @property
    def key(self) -> tuple[int, tuple[int, int, int, int]]:
        return self.channel.order, self.exponents

    def degree(self) -> tuple[int, int]:
        v1, v2, v3, v4 = self.exponents
        return max(v1, v2), max(v3, v4)

    def adjoint(self) -> "MonomialTerm":
        v1, v2, v3, v4 = self.exponents
        return MonomialTerm(self.coefficient, (v2, v1, v4, v3), self.channel.adjoint())

    def __str__(self) -> str:
        factors = []
        for power, symbol in zip(self.exponents, ("a1+", "a1", "a2+", "a2")):
            if power == 1:
                factors.append(symbol)
            elif power > 1:
                factors.append(f"({symbol})^{power}")
        if self.channel is not SpinChannel.IDENTITY:
            factors.append(self.channel.value)
        return f"{self.coefficient:.12g}" + ("*" + "*".join(factors) if factors else "")


@dataclass(frozen=True)
class HamiltonianSpec:
    """
    The coefficient tables of a two-mode boson x spin-1/2 Hamiltonian.

    Terms sharing exponents and channel are merged on construction and exact zeros
    are dropped, so two specs describing the same operator compare equal.
    """

    terms: tuple[MonomialTerm, ...] = ()

    def __post_init__(self):
        merged: dict[tuple, float] = {}
        channels: dict[tuple, SpinChannel] = {}
        for term in self.terms:
            merged[term.key] = merged.get(term.key, 0.0) + term.coefficient
            channels[term.key] = term.channel
        canonical = tuple(
            MonomialTerm(coefficient, key[1], channels[key])
            for key, coefficient in sorted(merged.items())
            if coefficient != 0.0
        )
        object.__setattr__(self, "terms", canonical)

    @classmethod
    def from_terms(cls, terms: Iterable[MonomialTerm]) -> "HamiltonianSpec":
        return cls(tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "HamiltonianSpec") -> "HamiltonianSpec":
        return HamiltonianSpec(self.terms + other.terms)

    def __sub__(self, other: "HamiltonianSpec") -> "HamiltonianSpec":
        return self + other * -1.0

    def __mul__(self, factor: float) -> "HamiltonianSpec":
        return HamiltonianSpec(
            tuple(MonomialTerm(t.coefficient * factor, t.exponents, t.channel) for t in self.terms)
        )

    __rmul__ = __mul__

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def adjoint(self) -> "HamiltonianSpec":
        return HamiltonianSpec(tuple(t.adjoint() for t in self.terms))

    def is_self_adjoint(self) -> bool:
        return self.adjoint() == self

    def max_degree(self) -> tuple[int, int]:
        if not self.terms:
            return 0, 0
        degrees = [t.degree() for t in self.terms]
        return max(d[0] for d in degrees), max(d[1] for d in degrees)

    def touches_mode(self, mode: int) -> bool:
        offset = 0 if mode == 1 else 2
        return any(t.exponents[offset] or t.exponents[offset + 1] for t in self.terms)


_ELEMENTARY = {
    "identity": ((0, 0, 0, 0), SpinChannel.IDENTITY),
    "a1": ((0, 1, 0, 0), SpinChannel.IDENTITY),
    "a1+": ((1, 0, 0, 0), SpinChannel.IDENTITY),
    "a2": ((0, 0, 0, 1), SpinChannel.IDENTITY),
    "a2+": ((0, 0, 1, 0), SpinChannel.IDENTITY),
    "sigma0": ((0, 0, 0, 0), SpinChannel.SIGMA0),
    "sigma+": ((0, 0, 0, 0), SpinChannel.SIGMA_PLUS),
    "sigma-": ((0, 0, 0, 0), SpinChannel.SIGMA_MINUS),
}


def elementary(name: str, coefficient: float = 1.0) -> HamiltonianSpec:
    if name not in _ELEMENTARY:
        raise ValueError(f"Unknown elementary operator '{name}', expected one of {sorted(_ELEMENTARY)}")
    exponents, channel = _ELEMENTARY[name]
    return HamiltonianSpec((MonomialTerm(coefficient, exponents, channel),))


def monomial(coefficient: float, v1=0, v2=0, v3=0, v4=0, channel=SpinChannel.IDENTITY) -> HamiltonianSpec:
    return HamiltonianSpec((MonomialTerm(coefficient, (v1, v2, v3, v4), channel),))


@dataclass(frozen=True)
class Basis:
    cutoff: tuple[int, int]
    states: tuple[FockState, ...] = field(init=False, repr=False, compare=False)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n1_max, n2_max = (int(c) for c in self.cutoff)
        if n1_max < 0 or n2_max < 0:
            raise ValueError(f"Cutoffs must be nonnegative, got {self.cutoff}")
        object.__setattr__(self, "cutoff", (n1_max, n2_max))
        states = tuple(
            FockState(n1, n2, spin)
            for n1, n2, spin in itertools.product(range(n1_max + 1), range(n2_max + 1), Spin)
        )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "index", {state: i for i, state in enumerate(states)})

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return self.size

    def ordinal(self, state: FockState) -> int | None:
        return self.index.get(state)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    basis: Basis
    matrix: csr_matrix

    def __post_init__(self):
        if self.matrix.shape != (self.basis.size, self.basis.size):
            raise ValueError(f"Matrix shape {self.matrix.shape} does not fit basis of size {self.basis.size}")

    def _check(self, other: "SparseOperator"):
        if self.basis != other.basis:
            raise BasisMismatchError(f"Operators live on different bases: {self.basis.cutoff} vs {other.basis.cutoff}")

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        return SparseOperator(self.basis, csr_matrix(self.matrix @ other.matrix))

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        return SparseOperator(self.basis, csr_matrix(self.matrix + other.matrix))

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        return SparseOperator(self.basis, csr_matrix(self.matrix - other.matrix))

    def __mul__(self, factor: float) -> "SparseOperator":
        return SparseOperator(self.basis, csr_matrix(self.matrix * factor))

    __rmul__ = __mul__

    def __neg__(self) -> "SparseOperator":
        return self * -1.0

    def entries(self) -> dict[tuple[int, int], float]:
        coo = self.matrix.tocoo()
        return {(int(i), int(j)): float(v) for i, j, v in zip(coo.row, coo.col, coo.data) if v != 0.0}

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def restrict(self, ordinals: Iterable[int]) -> np.ndarray:
        """Dense block on the given rows and columns, in ascending ordinal order."""
        idx = np.array(sorted(ordinals), dtype=int)
        return self.matrix[idx][:, idx].toarray()

    @classmethod
    def identity(cls, basis: Basis) -> "SparseOperator":
        return cls(basis, csr_matrix(sparse_identity(basis.size, format="csr")))


def _ladder_weight(n: int, annihilate: int, create: int) -> tuple[int, int] | None:
    """Falling-factorial weight of (a+)^create (a)^annihilate on |n>, and the new occupation."""
    if n < annihilate:
        return None
    lowered = n - annihilate
    raised = lowered + create
    return math.perm(n, annihilate) * math.perm(raised, create), raised


def apply_monomial(term: MonomialTerm, state: FockState) -> list[tuple[FockState, float]]:
    v1, v2, v3, v4 = term.exponents
    spin = state.spin
    spin_factor = 1.0
    if term.channel is SpinChannel.SIGMA0:
        spin_factor = float(spin.sign)
    elif term.channel is SpinChannel.SIGMA_PLUS:
        if spin is Spin.UP:
            return []
        spin = Spin.UP
    elif term.channel is SpinChannel.SIGMA_MINUS:
        if spin is Spin.DOWN:
            return []
        spin = Spin.DOWN

    mode2 = _ladder_weight(state.n2, v4, v3)
    mode1 = _ladder_weight(state.n1, v2, v1)
    if mode1 is None or mode2 is None:
        return []
    weight1, n1 = mode1
    weight2, n2 = mode2
    amplitude = term.coefficient * spin_factor * math.sqrt(weight1 * weight2)
    return [(FockState(n1, n2, spin), amplitude)]


def assemble_operator(spec: HamiltonianSpec, basis: Basis) -> SparseOperator:
    """
    Matrix of the Hamiltonian on a truncated basis.

    Images leaving the cutoff box are dropped, so only entries on an interior mask
    of adequate degree are trustworthy for operator identities.
    """
    if basis.size == 0:
        raise ValueError("Basis is empty")
    rows, cols, data = [], [], []
    for col, state in enumerate(basis.states):
        for term in spec.terms:
            for image, amplitude in apply_monomial(term, state):
                row = basis.ordinal(image)
                if row is None:
                    continue
                rows.append(row)
                cols.append(col)
                data.append(amplitude)
    coords = (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))
    matrix = csr_matrix((np.asarray(data, dtype=np.float64), coords), shape=(basis.size, basis.size))
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    logger.debug(f"Assembled {len(spec)} terms on cutoff {basis.cutoff}: {matrix.nnz} stored entries")
    return SparseOperator(basis, matrix)


def commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b - b @ a


def anticommutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b + b @ a


def interior_mask(basis: Basis, degree: tuple[int, int]) -> frozenset[int]:
    d1, d2 = degree
    n1_max, n2_max = basis.cutoff
    if d1 > n1_max or d2 > n2_max:
        raise EmptyInteriorError(f"Degree {degree} exceeds cutoff {basis.cutoff}")
    return frozenset(
        i for i, state in enumerate(basis.states) if state.n1 <= n1_max - d1 and state.n2 <= n2_max - d2
    )


def interior_block(op: SparseOperator, degree: tuple[int, int]) -> np.ndarray:
    mask = interior_mask(op.basis, degree)
    if not mask:
        raise EmptyInteriorError(f"No interior states for degree {degree} on cutoff {op.basis.cutoff}")
    return op.restrict(mask)
