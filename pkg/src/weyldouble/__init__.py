"""Exact computation with Weyl groupoids of bicharacters and normal-form
arithmetic in doubles of Nichols algebras of diagonal type."""

from .bicharacter import Bicharacter, NotPFiniteError, PFiniteness
from .catalog import CATALOG, catalog_entry
from .double import DoubleElement, is_zero_in_u, pairing
from .freealg import (FreeElement, braided_coproduct, der_k, der_l, e_minus,
                      e_plus, nichols_dim, nichols_is_zero)
from .groupoid import (CartanScheme, Morphism, explore, is_finite,
                       longest_into, rank2_M, real_roots)
from .lusztig import (build_ideal, build_lusztig_map, check_defining_relations,
                      coxeter_check, longest_factorization,
                      nichols_characterization, serre_family)
from .scalar import (Scalar, ScalarContext, parse_scalar, q_binomial,
                     q_factorial, q_int)

__version__ = "0.1.0"

__all__ = [
    "Bicharacter", "CATALOG", "CartanScheme", "DoubleElement", "FreeElement",
    "Morphism", "NotPFiniteError", "PFiniteness", "Scalar", "ScalarContext",
    "braided_coproduct", "build_ideal", "build_lusztig_map", "catalog_entry",
    "check_defining_relations", "coxeter_check", "der_k", "der_l", "e_minus",
    "e_plus", "explore", "is_finite", "is_zero_in_u", "longest_factorization",
    "longest_into", "nichols_characterization", "nichols_dim",
    "nichols_is_zero", "pairing", "parse_scalar", "q_binomial", "q_factorial",
    "q_int", "rank2_M", "real_roots", "serre_family",
]
