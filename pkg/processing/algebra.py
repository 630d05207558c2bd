import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from fock.core import (
    Basis,
    EmptyInteriorError,
    HamiltonianSpec,
    SparseOperator,
    SpinChannel,
    anticommutator,
    assemble_operator,
    commutator,
    interior_mask,
    monomial,
)

logger = logging.getLogger(__name__)

COMMUTATOR = "commutator"
ANTICOMMUTATOR = "anticommutator"
DEFAULT_TOL = 1e-10
COEFFICIENT_FLOOR = 1e-12

# sum of coefficient * product of generator labels; the empty product is the identity
Expression = list[tuple[float, tuple[str, ...]]]


class UnknownGeneratorSetError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    kind: str
    left: str
    right: str
    expected: tuple | None = None

    def describe(self) -> str:
        brackets = "[{}, {}]" if self.kind == COMMUTATOR else "{{{}, {}}}"
        text = brackets.format(self.left, self.right)
        if self.expected is None:
            return f"{text} in span"
        return f"{text} = {expression_text(self.expected)}"


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    generators: tuple[tuple[str, HamiltonianSpec], ...]
    relations: tuple[Relation, ...]
    graded: bool = False
    description: str = ""
    # generators appended to the named superalgebra so it closes
    added: tuple[str, ...] = ()

    def __post_init__(self):
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ValueError(f"Generator labels of '{self.name}' are not unique: {labels}")
        for relation in self.relations:
            for label in (relation.left, relation.right, *_expression_labels(relation.expected)):
                if label not in labels:
                    raise ValueError(f"Relation {relation.describe()} references unknown generator '{label}'")

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.generators]

    def spec(self, label: str) -> HamiltonianSpec:
        return dict(self.generators)[label]

    def is_odd(self, label: str) -> bool:
        return is_odd(self.spec(label))

    def max_degree(self) -> tuple[int, int]:
        degrees = [spec.max_degree() for _, spec in self.generators]
        return max(d[0] for d in degrees), max(d[1] for d in degrees)

    def operators(self, basis: Basis) -> dict[str, SparseOperator]:
        return {label: assemble_operator(spec, basis) for label, spec in self.generators}


def _expression_labels(expression) -> list[str]:
    if not expression:
        return []
    return [label for _, product in expression for label in product]


def expression_text(expression) -> str:
    parts = []
    for coefficient, product in expression:
        factor = "*".join(product) if product else "1"
        parts.append(f"{coefficient:+.12g}*{factor}")
    return " ".join(parts) if parts else "0"


def is_odd(spec: HamiltonianSpec) -> bool:
    """Odd generators flip the spin in every term."""
    flips = {t.channel in (SpinChannel.SIGMA_PLUS, SpinChannel.SIGMA_MINUS) for t in spec.terms}
    return flips == {True}


def bracket(a: SparseOperator, b: SparseOperator, kind: str = COMMUTATOR) -> SparseOperator:
    if kind == COMMUTATOR:
        return commutator(a, b)
    if kind == ANTICOMMUTATOR:
        return anticommutator(a, b)
    raise ValueError(f"Unknown bracket kind '{kind}'")


def graded_kind(odd_a: bool, odd_b: bool) -> str:
    return ANTICOMMUTATOR if odd_a and odd_b else COMMUTATOR


def superbracket(a: SparseOperator, b: SparseOperator, grading: tuple[bool, bool]) -> SparseOperator:
    return bracket(a, b, graded_kind(*grading))


def evaluate_expression(expression: Expression, operators: dict[str, SparseOperator], basis: Basis) -> SparseOperator:
    total = SparseOperator.identity(basis) * 0.0
    for coefficient, product in expression:
        term = SparseOperator.identity(basis)
        for label in product:
            term = term @ operators[label]
        total = total + term * coefficient
    return total


def _g(*pieces) -> HamiltonianSpec:
    spec = HamiltonianSpec()
    for piece in pieces:
        spec = spec + piece
    return spec


def _n1(c=1.0):
    return monomial(c, 1, 1, 0, 0)


def _n2(c=1.0):
    return monomial(c, 0, 0, 1, 1)


def _sigma0(c=1.0):
    return monomial(c, channel=SpinChannel.SIGMA0)


def _one(c=1.0):
    return monomial(c)


def _sp(v1=0, v2=0, v3=0, v4=0, c=1.0):
    return monomial(c, v1, v2, v3, v4, SpinChannel.SIGMA_PLUS)


def _sm(v1=0, v2=0, v3=0, v4=0, c=1.0):
    return monomial(c, v1, v2, v3, v4, SpinChannel.SIGMA_MINUS)


def _su2_generators():
    return (
        ("J0", _g(_n1(0.5), _n2(-0.5))),
        ("J+", monomial(1.0, 1, 0, 0, 1)),
        ("J-", monomial(1.0, 0, 1, 1, 0)),
    )


def _su11_generators():
    return (
        ("K0", _g(_n1(0.5), _n2(0.5), _one(0.5))),
        ("K+", monomial(1.0, 1, 0, 1, 0)),
        ("K-", monomial(1.0, 0, 1, 0, 1)),
    )


def _all_pairs(labels: list[str], odd: set[str]) -> tuple[Relation, ...]:
    relations = []
    for i, left in enumerate(labels):
        for right in labels[i:]:
            if left == right and left not in odd:
                continue
            relations.append(Relation(graded_kind(left in odd, right in odd), left, right))
    return tuple(relations)


def _su2() -> GeneratorSet:
    return GeneratorSet(
        name="su2",
        generators=_su2_generators(),
        relations=(
            Relation(COMMUTATOR, "J+", "J-", ((2.0, ("J0",)),)),
            Relation(COMMUTATOR, "J0", "J+", ((1.0, ("J+",)),)),
            Relation(COMMUTATOR, "J0", "J-", ((-1.0, ("J-",)),)),
        ),
        description="Schwinger bosons: J0 = (a1+a1 - a2+a2)/2, J+ = a1+a2, J- = a2+a1",
    )


def _su11() -> GeneratorSet:
    return GeneratorSet(
        name="su11",
        generators=_su11_generators(),
        relations=(
            Relation(COMMUTATOR, "K0", "K+", ((1.0, ("K+",)),)),
            Relation(COMMUTATOR, "K0", "K-", ((-1.0, ("K-",)),)),
            Relation(COMMUTATOR, "K+", "K-", ((-2.0, ("K0",)),)),
        ),
        description="two-mode pairs: K0 = (a1+a1 + a2+a2 + 1)/2, K+ = a1+a2+, K- = a2a1",
    )


def _sp4r() -> GeneratorSet:
    generators = (
        ("a1+a1", monomial(1.0, 1, 1, 0, 0)),
        ("a2+a2", monomial(1.0, 0, 0, 1, 1)),
        ("a1+a2", monomial(1.0, 1, 0, 0, 1)),
        ("a2+a1", monomial(1.0, 0, 1, 1, 0)),
        ("a1+a2+", monomial(1.0, 1, 0, 1, 0)),
        ("a2a1", monomial(1.0, 0, 1, 0, 1)),
        ("a1a1", monomial(1.0, 0, 2, 0, 0)),
        ("a2a2", monomial(1.0, 0, 0, 0, 2)),
        ("a1+a1+", monomial(1.0, 2, 0, 0, 0)),
        ("a2+a2+", monomial(1.0, 0, 0, 2, 0)),
    )
    return GeneratorSet(
        name="sp4r",
        generators=generators,
        relations=_all_pairs([label for label, _ in generators], set()),
        description="all ten boson bilinears",
    )


def _osp(name: str, even, z: HamiltonianSpec, odd, description: str) -> GeneratorSet:
    generators = tuple(even) + (("Z", z),) + tuple(odd)
    labels = [label for label, _ in generators]
    return GeneratorSet(
        name=name,
        generators=generators,
        relations=_all_pairs(labels, {label for label, _ in odd}),
        graded=True,
        description=description,
        added=("Z",),
    )


def _osp21_a() -> GeneratorSet:
    return _osp(
        "osp21_a",
        _su2_generators(),
        _g(_n1(), _n2(), _one(), _sigma0()),
        (
            ("V+", _sp(v4=1)),
            ("V-", _sp(v2=1, c=-1.0)),
            ("W+", _sm(v1=1)),
            ("W-", _sm(v3=1)),
        ),
        "su(2) extended by V+ = s+a2, V- = -s+a1, W+ = s-a1+, W- = s-a2+",
    )


def _osp21_b() -> GeneratorSet:
    return _osp(
        "osp21_b",
        _su2_generators(),
        _g(_n1(), _n2(), _one(), _sigma0(-1.0)),
        (
            ("V+", _sm(v4=1)),
            ("V-", _sm(v2=1, c=-1.0)),
            ("W+", _sp(v1=1)),
            ("W-", _sp(v3=1)),
        ),
        "su(2) extended by V+ = s-a2, V- = -s-a1, W+ = s+a1+, W- = s+a2+",
    )


def _osp22_a() -> GeneratorSet:
    return _osp(
        "osp22_a",
        _su11_generators(),
        _g(_n1(), _n2(-1.0), _sigma0(-1.0)),
        (
            ("V+", _sm(v3=1)),
            ("V-", _sm(v2=1)),
            ("W+", _sp(v1=1)),
            ("W-", _sp(v4=1)),
        ),
        "su(1,1) extended by V+ = s-a2+, V- = s-a1, W+ = s+a1+, W- = s+a2",
    )


def _osp22_b() -> GeneratorSet:
    return _osp(
        "osp22_b",
        _su11_generators(),
        _g(_n1(), _n2(-1.0), _sigma0()),
        (
            ("V+", _sp(v3=1)),
            ("V-", _sp(v2=1)),
            ("W+", _sm(v1=1)),
            ("W-", _sm(v4=1)),
        ),
        "su(1,1) extended by V+ = s+a2+, V- = s+a1, W+ = s-a1+, W- = s-a2",
    )


def _deformed_su2() -> GeneratorSet:
    return GeneratorSet(
        name="deformed_su2",
        generators=(
            ("Y+", _sp(v2=1)),
            ("Y-", _sm(v1=1)),
            ("Y0", _g(_n1(), _sigma0())),
            ("N", _g(_n1(), _sigma0(0.5))),
        ),
        relations=(
            Relation(COMMUTATOR, "Y0", "Y+", ((1.0, ("Y+",)),)),
            Relation(COMMUTATOR, "Y0", "Y-", ((-1.0, ("Y-",)),)),
            # (1 + 2 Y0)(Y0 - N) - 1/2
            Relation(
                COMMUTATOR,
                "Y+",
                "Y-",
                (
                    (1.0, ("Y0",)),
                    (-1.0, ("N",)),
                    (2.0, ("Y0", "Y0")),
                    (-2.0, ("Y0", "N")),
                    (-0.5, ()),
                ),
            ),
            Relation(COMMUTATOR, "N", "Y+", ()),
            Relation(COMMUTATOR, "N", "Y-", ()),
            Relation(COMMUTATOR, "N", "Y0", ()),
        ),
        description="quadratic algebra of the Kerr model: Y+ = a1 s+, Y- = a1+ s-, Y0 = a1+a1 + s0, N = a1+a1 + s0/2",
    )


CATALOG = {
    "su2": _su2,
    "su11": _su11,
    "sp4r": _sp4r,
    "osp21_a": _osp21_a,
    "osp21_b": _osp21_b,
    "osp22_a": _osp22_a,
    "osp22_b": _osp22_b,
    "deformed_su2": _deformed_su2,
}


def catalog(name: str) -> GeneratorSet:
    if name not in CATALOG:
        raise UnknownGeneratorSetError(f"Unknown generator set '{name}', expected one of {sorted(CATALOG)}")
    return CATALOG[name]()


@dataclass
class RelationResult:
    relation: Relation
    residual: float
    coefficients: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.describe(),
            "kind": self.relation.kind,
            "residual": self.residual,
            "coefficients": self.coefficients,
        }


@dataclass
class ClosureReport:
    name: str
    cutoff: tuple[int, int]
    tol: float
    results: list[RelationResult]
    added_generators: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(result.residual < self.tol for result in self.results)

    @property
    def max_residual(self) -> float:
        return max((result.residual for result in self.results), default=0.0)

    def failures(self) -> list[RelationResult]:
        return [result for result in self.results if result.residual >= self.tol]

    def to_dict(self) -> dict:
        return {
            "set": self.name,
            "cutoff": list(self.cutoff),
            "tol": self.tol,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "added_generators": list(self.added_generators),
            "relations": [result.to_dict() for result in self.results],
        }


def _round(value: float) -> float:
    return float(f"{value:.12g}")


def _expand_in_span(target: np.ndarray, columns: dict[str, np.ndarray]) -> tuple[float, dict[str, float]]:
    labels = list(columns)
    design = np.column_stack([columns[label].ravel() for label in labels])
    solution, *_ = scipy.linalg.lstsq(design, target.ravel())
    residual = float(np.max(np.abs(design @ solution - target.ravel()))) if target.size else 0.0
    coefficients = {
        label: _round(value) for label, value in zip(labels, solution) if abs(value) > COEFFICIENT_FLOOR
    }
    return residual, coefficients


def _interior(gens: GeneratorSet, basis: Basis) -> list[int]:
    longest = max([2] + [len(p) for r in gens.relations if r.expected for _, p in r.expected])
    d1, d2 = gens.max_degree()
    mask = interior_mask(basis, (longest * d1, longest * d2))
    if not mask:
        raise EmptyInteriorError(f"Cutoff {basis.cutoff} leaves no interior for '{gens.name}'")
    return sorted(mask)


def verify_closure(gens: GeneratorSet, cutoff: tuple[int, int], tol: float = DEFAULT_TOL) -> ClosureReport:
    """
    Check every relation of a generator set on the interior of a truncated basis.

    Relations with a stated right-hand side are compared directly; the rest are
    expanded by least squares over the generators plus the identity and pass when
    that expansion is exact.
    """
    basis = Basis(cutoff)
    mask = _interior(gens, basis)
    operators = gens.operators(basis)
    span = {label: op.restrict(mask) for label, op in operators.items()}
    span["1"] = np.eye(len(mask))

    results = []
    for relation in gens.relations:
        value = bracket(operators[relation.left], operators[relation.right], relation.kind)
        target = value.restrict(mask)
        if relation.expected is None:
            residual, coefficients = _expand_in_span(target, span)
        else:
            expected = evaluate_expression(relation.expected, operators, basis).restrict(mask)
            residual = float(np.max(np.abs(target - expected))) if target.size else 0.0
            coefficients = {expression_text(((c, p),)): c for c, p in relation.expected}
        logger.debug(f"{gens.name}: {relation.describe()} residual {residual:.3g}")
        results.append(RelationResult(relation, residual, coefficients))

    report = ClosureReport(gens.name, basis.cutoff, tol, results, gens.added)
    if gens.added:
        logger.info(f"{gens.name} includes generators beyond the named algebra: {list(gens.added)}")
    logger.info(f"{gens.name} on cutoff {basis.cutoff}: max residual {report.max_residual:.3g}, passed={report.passed}")
    return report


def span_residual(sub: GeneratorSet, whole: GeneratorSet, cutoff: tuple[int, int]) -> float:
    """Largest residual of expanding each generator of `sub` over `whole` plus identity."""
    basis = Basis(cutoff)
    d1, d2 = whole.max_degree()
    mask = sorted(interior_mask(basis, (d1, d2)))
    span = {label: op.restrict(mask) for label, op in whole.operators(basis).items()}
    span["1"] = np.eye(len(mask))
    worst = 0.0
    for label, op in sub.operators(basis).items():
        residual, _ = _expand_in_span(op.restrict(mask), span)
        worst = max(worst, residual)
    return worst


def odd_weight(result: RelationResult, gens: GeneratorSet) -> float:
    """Total weight a least-squares expansion puts on odd generators."""
    return sum(abs(c) for label, c in result.coefficients.items() if label in gens.labels and gens.is_odd(label))
