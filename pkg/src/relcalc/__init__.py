"""Linear relations (multivalued operators) in C^n."""

from .subspace import Subspace, span, column_span, complement, intersect, opening
from .relation import (
    Relation, ElementPair, from_graph, from_operator, components, inverse,
    adjoint, cw_sum, op_sum, op_diff, scalar_mul, shift, product,
    cw_orth_sum, infinity_ext, restrict_range, cross, identity_on, zero_on,
    embed,
)

__version__ = "0.1.0"
