"""Shared corpus of worked examples.

Each polytope is constructed with an explicit facet order fixing the
variable labels the golden values use.  The canonical constructor path
sorts facets lexicographically by normal instead, so every fixture records
its label conventions and component permutations here, next to the data.
"""

from fractions import Fraction

import pytest

from toriparam.polytope import Facet, LatticePolytope, frame_of
from toriparam.parametrization import LatticePolynomial, ParamSystem

# Unit square, facet labels x1 = left, x2 = right, x3 = bottom, x4 = top
# (offsets a1 = a3 = 0, a2 = a4 = 1).  Lattice points in lex order are
# (0,0),(0,1),(1,0),(1,1) with monomials (x2*x4, x2*x3, x1*x4, x1*x3); the
# quadric presentation (x2*x3, x1*x3, x2*x4, x1*x4) is lex components
# [1, 3, 0, 2].
SQUARE_FACETS = (Facet((1, 0), 0), Facet((-1, 0), 1),
                 Facet((0, 1), 0), Facet((0, -1), 1))
SQUARE_QUADRIC_ORDER = (1, 3, 0, 2)

# Pentagon (blowup of the square example), labels x1 = left, x2 = lower
# diagonal, x3 = bottom, x4 = right, x5 = top; all offsets 1.  The table
# order of the 8 monomials maps to lex point order by PENTAGON_TABLE_ORDER.
PENTAGON_FACETS = (Facet((1, 0), 1), Facet((1, 1), 1), Facet((0, 1), 1),
                   Facet((-1, 0), 1), Facet((0, -1), 1))
PENTAGON_TABLE_ORDER = (1, 4, 7, 0, 3, 6, 2, 5)

# Twice dilated standard triangle; x1 = left, x2 = bottom, x3 = hypotenuse
# (offsets 0, 0, 2).  Its six point monomials give the degree-2 embedding.
P2_FACETS = (Facet((1, 0), 0), Facet((0, 1), 0), Facet((-1, -1), 2))

# Singular triangle with vertices (1,0),(0,1),(-1,0); x1 = bottom,
# x2 = right edge, x3 = left edge.  The minimal resolution appends the ray
# (0,-1) as x4; the resolved labeling elsewhere written (x1,x2,x3,x4) with
# the added ray third corresponds to our (x1,x2,x4,x3):
# SINGTRI_RESOLVED_ORDER[i] is our index of label i+1.
SINGTRI_FACETS = (Facet((0, 1), 0), Facet((-1, -1), 1), Facet((1, -1), 1))
SINGTRI_RESOLVED_ORDER = (0, 1, 3, 2)

# Quadrilateral with vertices (1,0),(0,1),(-1,1),(-1,0); x1 = bottom,
# x2 = slanted right edge, x3 = top, x4 = left.
HIRZEBRUCH_FACETS = (Facet((0, 1), 0), Facet((-1, -1), 1),
                     Facet((0, -1), 1), Facet((1, 0), 1))


@pytest.fixture
def square() -> LatticePolytope:
    return LatticePolytope(2, ((0, 0), (1, 0), (1, 1), (0, 1)), SQUARE_FACETS)


@pytest.fixture
def pentagon() -> LatticePolytope:
    return LatticePolytope(2, ((1, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)),
                           PENTAGON_FACETS)


@pytest.fixture
def p2_triangle() -> LatticePolytope:
    return LatticePolytope(2, ((0, 0), (2, 0), (0, 2)), P2_FACETS)


@pytest.fixture
def singular_triangle() -> LatticePolytope:
    return LatticePolytope(2, ((1, 0), (0, 1), (-1, 0)), SINGTRI_FACETS)


@pytest.fixture
def hirzebruch_quad() -> LatticePolytope:
    return LatticePolytope(2, ((1, 0), (0, 1), (-1, 1), (-1, 0)),
                           HIRZEBRUCH_FACETS)


def steiner_system(p2: LatticePolytope) -> ParamSystem:
    """(x1^2 + x2^2 + x3^2, x1*x2, x2*x3, x3*x1) over the dilated triangle."""
    frame = frame_of(p2)
    one = Fraction(1)
    return ParamSystem(frame, (
        LatticePolynomial(frame, (((2, 0), one), ((0, 2), one), ((0, 0), one))),
        LatticePolynomial.single(frame, (1, 1)),
        LatticePolynomial.single(frame, (0, 1)),
        LatticePolynomial.single(frame, (1, 0)),
    ))
