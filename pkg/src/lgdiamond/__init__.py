"""lgdiamond: bigraded state spaces of Landau-Ginzburg orbifolds.

Given a quasihomogeneous polynomial with an isolated critical point at
the origin and a finite group of monomial-matrix symmetries, this
package computes the orbifold state space sector by sector, assembles
its Hodge diamond, and checks the expected symmetry and duality
properties of that diamond.

The usual pipeline:

    >>> from lgdiamond import (
    ...     StateSpace, analyze_weights, assemble_diamond,
    ...     generate_group, make_jf, parse_polynomial, verify_theorem,
    ... )
    >>> f, names = parse_polynomial("x1^3 + x2^3 + x3^3")
    >>> _, _, w = analyze_weights(f)
    >>> group = generate_group([make_jf(w)], f)
    >>> state = StateSpace(f, w, group, names)
    >>> assemble_diamond(state)[1]
    [[1, 1], [1, 1]]
"""

from .errors import (
    LgError,
    MissingJ,
    NonIntegerCharge,
    NotInSL,
    NotIsolated,
    PreconditionFailed,
)
from .jacobian import milnor_number, poincare_dimensions, quotient_ring
from .polynomial import Polynomial, WeightSystem, parse_polynomial
from .quasihom import analyze_weights, classify_invertible, transpose_polynomial
from .statespace import (
    StateSpace,
    assemble_diamond,
    duality_check,
    invariant_basis,
    transpose_check,
    verify_theorem,
)
from .symmetry import (
    GroupElement,
    diagonal_symmetries,
    generate_group,
    make_jf,
)

__all__ = [
    "GroupElement",
    "LgError",
    "MissingJ",
    "NonIntegerCharge",
    "NotInSL",
    "NotIsolated",
    "Polynomial",
    "PreconditionFailed",
    "StateSpace",
    "WeightSystem",
    "analyze_weights",
    "assemble_diamond",
    "classify_invertible",
    "diagonal_symmetries",
    "duality_check",
    "generate_group",
    "invariant_basis",
    "make_jf",
    "milnor_number",
    "parse_polynomial",
    "poincare_dimensions",
    "quotient_ring",
    "transpose_check",
    "transpose_polynomial",
    "verify_theorem",
]
__version__ = "0.1.0"
