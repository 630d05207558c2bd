from .core import (
    Basis,
    BasisMismatchError,
    EmptyInteriorError,
    FockState,
    HamiltonianSpec,
    MonomialTerm,
    SparseOperator,
    Spin,
    SpinChannel,
    anticommutator,
    apply_monomial,
    assemble_operator,
    commutator,
    elementary,
    interior_block,
    interior_mask,
    monomial,
)
from .document import dump_spec, load_spec, spec_from_dict, spec_to_dict

__all__ = [
    'Basis',
    'BasisMismatchError',
    'EmptyInteriorError',
    'FockState',
    'HamiltonianSpec',
    'MonomialTerm',
    'SparseOperator',
    'Spin',
    'SpinChannel',
    'anticommutator',
    'apply_monomial',
    'assemble_operator',
    'commutator',
    'elementary',
    'interior_block',
    'interior_mask',
    'monomial',
    'dump_spec',
    'load_spec',
    'spec_from_dict',
    'spec_to_dict',
]
