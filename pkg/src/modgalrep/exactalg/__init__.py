"""Exact base arithmetic: integers, finite fields, integer lattices."""

from .arith import (
    divisors,
    euler_phi,
    inverse_mod,
    multiplicative_order,
    primes_up_to,
    unit_group,
    UnitGroup,
    xgcd,
)
from .gf import (
    element_of_order,
    embed_field,
    fq_field,
    fq_str,
    FqElem,
    FqField,
    poly_factor_fq,
    poly_from_ints,
    poly_roots,
)
from .intmat import (
    identity_matrix,
    IntegerLattice,
    kernel_int,
    lattice_quotient,
    mat_mul,
    QuotientMap,
    quotient_by_relations,
    SaturationError,
    solve_int,
    transpose,
)

__all__ = [
    "divisors", "euler_phi", "inverse_mod", "multiplicative_order",
    "primes_up_to", "unit_group", "UnitGroup", "xgcd",
    "element_of_order", "embed_field", "fq_field", "fq_str", "FqElem",
    "FqField", "poly_factor_fq", "poly_from_ints", "poly_roots",
    "identity_matrix", "IntegerLattice", "kernel_int", "lattice_quotient",
    "mat_mul", "QuotientMap", "quotient_by_relations", "SaturationError",
    "solve_int", "transpose",
]
