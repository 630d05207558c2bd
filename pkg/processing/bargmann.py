"""
One-variable realization of conserved sectors.

A sector of N is a pair of integer lattice lines, one per spin component. Each
line is walked from its first valid point `b` by a primitive step `d`, so the
occupation state at position t is b + t*d. In the Bargmann picture that state is
the monomial z1^(b1 + t*d1) z2^(b2 + t*d2), i.e. the prefactor z1^b1 z2^b2 times
x^t with x = z1^d1 z2^d2. Every conserved monomial term then acts on x^t as a
polynomial in t times a fixed power of x, which is a finite differential operator
in x.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import numpy.polynomial.chebyshev as cheb
import scipy.linalg
import sympy
from numpy.polynomial import Chebyshev, Polynomial

from fock.core import FockState, HamiltonianSpec, MonomialTerm, Spin, SpinChannel, apply_monomial
from processing.symmetry import (
    EmptySectorError,
    NumberOperatorSpec,
    SectorLabel,
    require_conserved,
)

logger = logging.getLogger(__name__)

X, E = sympy.symbols("x E")

DEFAULT_TRUNCATION = 40
DEGENERATE_LEADING = 1e-14
SYMMETRY_ATOL = 1e-12


class SectorAnsatzError(ValueError):
    pass


class RecursionBandwidthError(ValueError):
    pass


class DegreeReductionWarning(UserWarning):
    pass


def _integers(*values: Fraction) -> list[int]:
    scale = math.lcm(*(Fraction(v).denominator for v in values))
    return [int(Fraction(v) * scale) for v in values]


def _falling(n: int, k: int) -> int:
    result = 1
    for i in range(k):
        result *= n - i
    return result


def _output_spin(channel: SpinChannel, spin: Spin) -> Spin | None:
    if channel is SpinChannel.SIGMA_PLUS:
        return Spin.UP if spin is Spin.DOWN else None
    if channel is SpinChannel.SIGMA_MINUS:
        return Spin.DOWN if spin is Spin.UP else None
    return spin


def _spin_factor(channel: SpinChannel, spin: Spin) -> int:
    return spin.sign if channel is SpinChannel.SIGMA0 else 1


@dataclass(frozen=True)
class LatticeComponent:
    spin: Spin
    base: tuple[int, int]
    length: int | None

    @property
    def finite(self) -> bool:
        return self.length is not None


@dataclass(frozen=True)
class SectorLattice:
    label: SectorLabel
    step: tuple[int, int]
    components: dict

    @property
    def finite(self) -> bool:
        return all(c.finite for c in self.components.values())

    @property
    def dimension(self) -> int | None:
        if not self.finite:
            return None
        return sum(c.length for c in self.components.values())

    def state(self, spin: Spin, t: int) -> FockState:
        b1, b2 = self.components[spin].base
        return FockState(b1 + t * self.step[0], b2 + t * self.step[1], spin)

    def multiple(self, offset: tuple[int, int]) -> int | None:
        """The integer t with offset == t * step, or None."""
        if self.step == (0, 0):
            return 0 if offset == (0, 0) else None
        axis = 0 if self.step[0] != 0 else 1
        t, remainder = divmod(offset[axis], self.step[axis])
        if remainder or (offset[0] != t * self.step[0]) or (offset[1] != t * self.step[1]):
            return None
        return t

    def locate(self, state: FockState) -> int | None:
        component = self.components.get(state.spin)
        if component is None:
            return None
        t = self.multiple((state.n1 - component.base[0], state.n2 - component.base[1]))
        if t is None or t < 0 or (component.finite and t >= component.length):
            return None
        return t


def _lattice_step(spec: HamiltonianSpec, n: NumberOperatorSpec) -> tuple[tuple[int, int], bool, bool]:
    frozen1 = n.s == 0 and not spec.touches_mode(1)
    frozen2 = n.p == 0 and not spec.touches_mode(2)
    if frozen1 and frozen2:
        return (0, 0), frozen1, frozen2
    if frozen2:
        return ((0, 0) if n.s != 0 else (1, 0)), frozen1, frozen2
    if frozen1:
        return ((0, 0) if n.p != 0 else (0, 1)), frozen1, frozen2
    if n.s == 0 and n.p == 0:
        raise SectorAnsatzError("N carries no boson weight while both modes are active; no single-variable line")
    if n.s == 0:
        return (1, 0), frozen1, frozen2
    if n.p == 0:
        return (0, 1), frozen1, frozen2
    s, p = _integers(n.s, n.p)
    if s < 0:
        s, p = -s, -p
    g = math.gcd(s, p)
    return (-p // g, s // g), frozen1, frozen2


def _exact_quotient(c: Fraction, w: Fraction) -> int | None:
    q = c / w
    if q.denominator != 1 or q < 0:
        return None
    return int(q)


def _component(n: NumberOperatorSpec, c: Fraction, spin: Spin, step, frozen1, frozen2) -> LatticeComponent | None:
    """First valid point and length of the line s*n1 + p*n2 = c."""
    if step == (0, 0):
        if frozen1 and frozen2:
            return LatticeComponent(spin, (0, 0), 1) if c == 0 else None
        if frozen2:
            n1 = _exact_quotient(c, n.s)
            return None if n1 is None else LatticeComponent(spin, (n1, 0), 1)
        n2 = _exact_quotient(c, n.p)
        return None if n2 is None else LatticeComponent(spin, (0, n2), 1)
    if step == (1, 0):
        if n.p == 0:
            return LatticeComponent(spin, (0, 0), None) if c == 0 else None
        n2 = _exact_quotient(c, n.p)
        return None if n2 is None else LatticeComponent(spin, (0, n2), None)
    if step == (0, 1):
        if n.s == 0:
            return LatticeComponent(spin, (0, 0), None) if c == 0 else None
        n1 = _exact_quotient(c, n.s)
        return None if n1 is None else LatticeComponent(spin, (n1, 0), None)

    s, p, total = _integers(n.s, n.p, c)
    if s < 0:
        s, p, total = -s, -p, -total
    period = step[1]
    if p > 0:
        if total < 0:
            return None
        lower, upper = 0, total // p
    else:
        lower, upper = max(0, -(-total // p)), None
    for n2 in range(lower, lower + period):
        if upper is not None and n2 > upper:
            return None
        if (total - p * n2) % s == 0:
            base = ((total - p * n2) // s, n2)
            length = None if upper is None else (upper - n2) // period + 1
            return LatticeComponent(spin, base, length)
    return None


def sector_lattice(spec: HamiltonianSpec, n: NumberOperatorSpec, sector: SectorLabel) -> SectorLattice:
    step, frozen1, frozen2 = _lattice_step(spec, n)
    components = {}
    for spin in Spin:
        component = _component(n, sector.eigenvalue - n.r * spin.sign, spin, step, frozen1, frozen2)
        if component is not None and component.length != 0:
            components[spin] = component
    if not components:
        raise EmptySectorError(f"Sector {sector} of N={n} holds no states")
    return SectorLattice(sector, step, components)


def bargmann_action(term: MonomialTerm, state: FockState) -> tuple[FockState, float] | None:
    """Image of a monomial term on z1^n1 z2^n2 with a+ -> z and a -> d/dz."""
    images = apply_monomial(term, state)
    if not images:
        return None
    image, _ = images[0]
    v1, v2, v3, v4 = term.exponents
    value = term.coefficient * _spin_factor(term.channel, state.spin)
    return image, value * _falling(state.n1, v2) * _falling(state.n2, v4)


@dataclass(frozen=True, eq=False)
class ReducedSector:
    label: SectorLabel
    lattice: SectorLattice
    states: tuple[tuple[Spin, int], ...]
    matrix: np.ndarray
    monomial: np.ndarray
    leading_spin: Spin
    truncated: bool

    @property
    def dimension(self) -> int:
        return len(self.states)

    @property
    def occupations(self) -> list[FockState]:
        return [self.lattice.state(spin, t) for spin, t in self.states]

    @property
    def degrees(self) -> tuple[int, int]:
        """Highest x power kept in the spin-up and spin-down components (-1 when absent)."""
        up = [t for spin, t in self.states if spin is Spin.UP]
        down = [t for spin, t in self.states if spin is Spin.DOWN]
        return max(up, default=-1), max(down, default=-1)

    @property
    def bandwidth(self) -> tuple[int, int]:
        return _bandwidth(self.matrix)

    def monomial_matrix(self) -> np.ndarray:
        return self.monomial

    def metadata(self) -> dict:
        lower, upper = self.bandwidth
        return {
            "sector": str(self.label),
            "dimension": self.dimension,
            "degrees": list(self.degrees),
            "leading_spin": self.leading_spin.name.lower(),
            "bandwidth": {"lower": lower, "upper": upper},
            "truncated": self.truncated,
            "step": list(self.lattice.step),
            "prefactors": {spin.name.lower(): list(c.base) for spin, c in self.lattice.components.items()},
        }


def _bandwidth(matrix: np.ndarray) -> tuple[int, int]:
    rows, cols = np.nonzero(matrix)
    if rows.size == 0:
        return 0, 0
    return int(max(0, np.max(rows - cols))), int(max(0, np.max(cols - rows)))


def _ordering(lattice: SectorLattice, leading: Spin, truncation: int | None) -> list[tuple[Spin, int]]:
    spins = [leading, Spin.DOWN if leading is Spin.UP else Spin.UP]
    spins = [spin for spin in spins if spin in lattice.components]
    order = []
    t = 0
    while True:
        active = False
        for spin in spins:
            component = lattice.components[spin]
            if component.finite and t >= component.length:
                continue
            active = True
            if truncation is not None and len(order) >= truncation:
                return order
            order.append((spin, t))
        if not active:
            return order
        t += 1


def _sector_matrices(spec: HamiltonianSpec, lattice: SectorLattice, order) -> tuple[np.ndarray, np.ndarray]:
    position = {key: i for i, key in enumerate(order)}
    size = len(order)
    orthonormal = np.zeros((size, size))
    monomial = np.zeros((size, size))
    for col, (spin, t) in enumerate(order):
        state = lattice.state(spin, t)
        for term in spec.terms:
            for image, amplitude in apply_monomial(term, state):
                target = lattice.locate(image)
                row = position.get((image.spin, target)) if target is not None else None
                if row is None:
                    continue
                orthonormal[row, col] += amplitude
                monomial[row, col] += bargmann_action(term, state)[1]
    return orthonormal, monomial


def reduce_sector(
    spec: HamiltonianSpec,
    n: NumberOperatorSpec,
    sector: SectorLabel,
    truncation: int = DEFAULT_TRUNCATION,
) -> ReducedSector:
    """
    H restricted to one sector, indexed by the single monomial degree t.

    States are interleaved by t; the spin leading each degree is the one giving the
    smaller upper bandwidth (spin up on ties). Finite sectors ignore `truncation`.
    """
    require_conserved(spec, n)
    lattice = sector_lattice(spec, n, sector)
    if lattice.finite:
        limit = None
    else:
        if truncation < 1:
            raise ValueError(f"Truncation must be positive, got {truncation}")
        limit = truncation

    best = None
    for leading in (Spin.UP, Spin.DOWN):
        order = _ordering(lattice, leading, limit)
        orthonormal, monomial = _sector_matrices(spec, lattice, order)
        upper = _bandwidth(orthonormal)[1]
        if best is None or upper < best[0]:
            best = (upper, leading, order, orthonormal, monomial)
        if len(lattice.components) == 1:
            break
    _, leading, order, orthonormal, monomial = best
    reduced = ReducedSector(
        label=sector,
        lattice=lattice,
        states=tuple(order),
        matrix=orthonormal,
        monomial=monomial,
        leading_spin=leading,
        truncated=not lattice.finite,
    )
    logger.debug(f"Reduced sector {sector}: {reduced.metadata()}")
    return reduced


def exact(value: float) -> sympy.Rational:
    """Decimal value of a float as an exact rational, so 0.3 becomes 3/10."""
    return sympy.Rational(repr(float(value)))


@dataclass(frozen=True, eq=False)
class PolyMatrixODE:
    """
    Coupled 2x2 system sum_d M_d(x, E) (d/dx)^d (phi_up, phi_down) = 0.

    Row and column 0 are spin up, 1 spin down. E only enters M_0, as -E times
    the identity.
    """

    label: SectorLabel
    lattice: SectorLattice
    orders: tuple[sympy.ImmutableMatrix, ...]

    @property
    def max_order(self) -> int:
        nonzero = [d for d, m in enumerate(self.orders) if any(sympy.expand(e) != 0 for e in m)]
        return max(nonzero, default=0)

    def entry(self, order: int, row: int, col: int) -> sympy.Expr:
        if order >= len(self.orders):
            return sympy.Integer(0)
        return sympy.expand(self.orders[order][row, col])

    def scaled(self, factor) -> "PolyMatrixODE":
        factor = sympy.nsimplify(factor)
        return PolyMatrixODE(self.label, self.lattice, tuple(sympy.ImmutableMatrix(m * factor) for m in self.orders))

    def monomial_action(self, spin: Spin, t: int, energy=0) -> dict[tuple[Spin, int], float]:
        """Coefficients of the image of x^t in component `spin`, keyed by (spin, power)."""
        col = int(spin)
        image: dict[tuple[Spin, int], float] = {}
        for d, matrix in enumerate(self.orders):
            falling = _falling(t, d)
            if falling == 0:
                continue
            for row in (0, 1):
                poly = sympy.Poly(sympy.expand(matrix[row, col].subs(E, energy)), X)
                for (power,), coefficient in poly.terms():
                    key = (Spin(row), power + t - d)
                    image[key] = image.get(key, 0.0) + float(coefficient) * falling
        return {key: value for key, value in image.items() if value != 0.0}

    def residual(self, phi_up: Polynomial, phi_down: Polynomial, energy: float, xs) -> float:
        xs = np.asarray(xs, dtype=float)
        components = (phi_up, phi_down)
        worst = 0.0
        for row in (0, 1):
            total = np.zeros_like(xs)
            for d, matrix in enumerate(self.orders):
                for col in (0, 1):
                    expr = matrix[row, col]
                    if expr == 0:
                        continue
                    coefficient = sympy.lambdify(X, expr.subs(E, energy), "numpy")
                    total = total + coefficient(xs) * components[col].deriv(d)(xs)
            worst = max(worst, float(np.max(np.abs(total))))
        return worst

    def to_dict(self) -> dict:
        return {
            "sector": str(self.label),
            "variable": _variable_text(self.lattice.step),
            "prefactors": {
                spin.name.lower(): _prefactor_text(c.base) for spin, c in sorted(self.lattice.components.items())
            },
            "orders": [
                {"order": d, "matrix": [[str(self.entry(d, r, c)) for c in (0, 1)] for r in (0, 1)]}
                for d in range(len(self.orders))
            ],
        }

    def pretty(self) -> str:
        data = self.to_dict()
        lines = [f"sector {data['sector']}: x = {data['variable']}"]
        for spin, prefactor in data["prefactors"].items():
            lines.append(f"  phi_{spin} prefactor {prefactor}")
        for record in data["orders"]:
            cells = [cell for row in record["matrix"] for cell in row]
            width = max(len(cell) for cell in cells)
            lines.append(f"  order {record['order']}:")
            for row in record["matrix"]:
                lines.append("    [ " + "  ".join(cell.rjust(width) for cell in row) + " ]")
        return "\n".join(lines)


def _variable_text(step: tuple[int, int]) -> str:
    return _prefactor_text(step, empty="1")


def _prefactor_text(powers: tuple[int, int], empty: str = "1") -> str:
    factors = []
    for symbol, power in zip(("z1", "z2"), powers):
        if power == 1:
            factors.append(symbol)
        elif power != 0:
            factors.append(f"{symbol}^{power}")
    return "*".join(factors) or empty


def extract_ode(spec: HamiltonianSpec, n: NumberOperatorSpec, sector: SectorLabel) -> PolyMatrixODE:
    """
    Differential realization of (H - E) psi = 0 on one sector.

    A term taking x^t of one component to c(t) x^(t + shift) of another is written
    through the falling-factorial expansion c(t) = sum_d e_d t(t-1)...(t-d+1), which
    is the operator sum_d e_d x^(d + shift) (d/dx)^d.
    """
    require_conserved(spec, n)
    lattice = sector_lattice(spec, n, sector)
    step = lattice.step
    matrices: dict[int, sympy.Matrix] = {0: sympy.zeros(2, 2)}

    for term in spec.terms:
        v1, v2, v3, v4 = term.exponents
        coefficient = exact(term.coefficient)
        for spin_in in Spin:
            spin_out = _output_spin(term.channel, spin_in)
            if spin_out is None or spin_in not in lattice.components or spin_out not in lattice.components:
                continue
            b_in = lattice.components[spin_in].base
            b_out = lattice.components[spin_out].base
            shift = lattice.multiple((b_in[0] - b_out[0] + v1 - v2, b_in[1] - b_out[1] + v3 - v4))
            if shift is None:
                raise SectorAnsatzError(f"Term {term} leaves the lattice of sector {sector}")
            depth = 0 if step == (0, 0) else v2 + v4
            values = [
                coefficient
                * _spin_factor(term.channel, spin_in)
                * _falling(b_in[0] + k * step[0], v2)
                * _falling(b_in[1] + k * step[1], v4)
                for k in range(depth + 1)
            ]
            for d in range(depth + 1):
                e_d = sum((-1) ** (d - i) * math.comb(d, i) * values[i] for i in range(d + 1)) / math.factorial(d)
                if e_d == 0:
                    continue
                if d + shift < 0:
                    raise SectorAnsatzError(f"Term {term} needs a negative power of x in sector {sector}")
                matrices.setdefault(d, sympy.zeros(2, 2))
                matrices[d][int(spin_out), int(spin_in)] += e_d * X ** (d + shift)

    matrices[0] = matrices[0] - E * sympy.eye(2)
    top = max(matrices)
    orders = tuple(sympy.ImmutableMatrix(matrices.get(d, sympy.zeros(2, 2)).applyfunc(sympy.expand)) for d in range(top + 1))
    ode = PolyMatrixODE(sector, lattice, orders)
    logger.info(f"Extracted order-{ode.max_order} ODE for sector {sector}, x = {_variable_text(step)}")
    return ode


@dataclass(frozen=True, eq=False)
class EnergyPolynomialSequence:
    """
    P_0 = 1, P_1, ... as Chebyshev series on the Gershgorin interval of the block.

    Each P_k is proportional to det(E - A_k) over the leading k x k block, scaled
    so its leading Chebyshev coefficient is 1. The series are for evaluation; when
    the block is kept, roots come from its leading k x k submatrix.
    """

    polynomials: tuple[Chebyshev, ...]
    domain: tuple[float, float]
    vanishing_pivots: tuple[int, ...] = ()
    label: SectorLabel | None = None
    block: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.polynomials)

    def __getitem__(self, k: int) -> Chebyshev:
        return self.polynomials[k]

    def degrees(self) -> list[int]:
        return [p.degree() for p in self.polynomials]

    @classmethod
    def from_power_coefficients(cls, coefficients) -> "EnergyPolynomialSequence":
        """Wrap one polynomial given by ascending power coefficients."""
        poly = Polynomial(np.asarray(coefficients, dtype=float)).convert(kind=Chebyshev)
        return cls(polynomials=(Chebyshev([1.0]), poly), domain=(-1.0, 1.0))

    def metadata(self) -> dict:
        return {
            "sector": None if self.label is None else str(self.label),
            "count": len(self.polynomials) - 1,
            "domain": list(self.domain),
            "vanishing_pivots": list(self.vanishing_pivots),
        }


def _gershgorin(matrix: np.ndarray) -> tuple[float, float]:
    diagonal = np.diag(matrix)
    radii = np.sum(np.abs(matrix), axis=1) - np.abs(diagonal)
    return float(np.min(diagonal - radii)), float(np.max(diagonal + radii))


def energy_polynomials(red: ReducedSector | np.ndarray, count: int | None = None) -> EnergyPolynomialSequence:
    """
    Leading principal minors of the reduced block through the lower-Hessenberg recursion

        P_{k+1} = (E - a_kk) P_k - sum_{i<k} a_ki (a_{i,i+1} ... a_{k-1,k}) P_i

    which never divides by a superdiagonal pivot.
    """
    matrix = red.matrix if isinstance(red, ReducedSector) else np.asarray(red, dtype=float)
    label = red.label if isinstance(red, ReducedSector) else None
    size = matrix.shape[0]
    count = size if count is None else count
    if not 0 <= count <= size:
        raise ValueError(f"count must lie in 0..{size}, got {count}")
    if np.any(np.triu(matrix, k=2) != 0):
        raise RecursionBandwidthError(f"Block of sector {label} has upper bandwidth {_bandwidth(matrix)[1]} > 1")

    lo, hi = _gershgorin(matrix)
    middle = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    if half <= 0:
        half = 1.0
    scaled = (matrix - middle * np.eye(size)) / half

    def norm(k: int) -> float:
        return 1.0 if k == 0 else 2.0 ** (k - 1)

    series = [np.array([1.0])]
    vanishing = []
    for k in range(count):
        following = cheb.chebsub(cheb.chebmulx(series[k]), scaled[k, k] * series[k]) * (norm(k + 1) / norm(k))
        chain = 1.0
        for i in range(k - 1, -1, -1):
            chain *= scaled[i, i + 1]
            weight = scaled[k, i] * chain
            if weight != 0.0:
                following = cheb.chebsub(following, weight * (norm(k + 1) / norm(i)) * series[i])
        series.append(following)
        if k + 1 < count and scaled[k, k + 1] == 0.0:
            vanishing.append(k)
    if vanishing:
        logger.warning(f"Sector {label}: superdiagonal pivots vanish at {vanishing}; the block decouples there")

    domain = (middle - half, middle + half)
    polynomials = tuple(Chebyshev(c, domain=list(domain)) for c in series)
    return EnergyPolynomialSequence(polynomials, domain, tuple(vanishing), label, matrix[:count, :count].copy())


def _block_roots(block: np.ndarray) -> np.ndarray:
    if np.allclose(block, block.T, rtol=0.0, atol=SYMMETRY_ATOL):
        return scipy.linalg.eigvalsh(0.5 * (block + block.T))
    return scipy.linalg.eigvals(block)


def qes_roots(seq: EnergyPolynomialSequence, k: int | None = None) -> np.ndarray:
    """
    Roots of P_k, sorted by real part.

    P_k is the characteristic polynomial of the leading k x k block, which is the
    comrade matrix of the recursion, so its eigenvalues are taken directly. Only a
    sequence without a block falls back to the roots of the Chebyshev series.
    """
    k = len(seq) - 1 if k is None else k
    if not 0 <= k < len(seq):
        raise ValueError(f"Polynomial P_{k} not available, sequence holds P_0..P_{len(seq) - 1}")
    if seq.block is not None:
        if k == 0:
            return np.array([])
        roots = _block_roots(seq.block[:k, :k])
        order = np.lexsort((np.imag(roots), np.real(roots)))
        return roots[order]

    poly = seq[k]
    coefficients = np.array(poly.coef, dtype=float)
    scale = float(np.max(np.abs(coefficients))) if coefficients.size else 0.0
    trimmed = coefficients
    while trimmed.size > 1 and abs(trimmed[-1]) < DEGENERATE_LEADING * max(scale, 1.0):
        trimmed = trimmed[:-1]
    if trimmed.size < coefficients.size:
        message = f"Leading coefficients of P_{k} below {DEGENERATE_LEADING}; degree reduced {coefficients.size - 1} -> {trimmed.size - 1}"
        logger.warning(message)
        warnings.warn(message, DegreeReductionWarning, stacklevel=2)
    if trimmed.size < 2:
        return np.array([])
    roots = Chebyshev(trimmed, domain=poly.domain).roots()
    order = np.lexsort((np.imag(roots), np.real(roots)))
    return roots[order]
