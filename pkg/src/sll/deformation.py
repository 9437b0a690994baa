"""The first-order isotropy relation of a deformed Hodge filtration, and
the tangent Frobenius / non-ordinary determinant of the standard display.

Given a module with Hodge frame (Y1, Y2 | X1, X2), the deformed filtration
generators are

    Y1~ = Y1 + t11 X1 + t12 X2,    Y2~ = Y2 + t21 X1 + t22 X2,

and the relation is the expansion of <Y1~, Y2~> from the pairing matrix:

    <Y1,Y2> + sum_j t2j <Y1,Xj> - sum_i t1i <Y2,Xi>
            + sum_{i,j} t1i t2j <Xi,Xj>.

The sign convention is anchored by the standard superspecial fixture,
whose frame must produce exactly p + t11*t22 - t12*t21.  The crystalline
machinery behind the relation is represented purely by this output
contract; no crystal objects are modeled.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import PreconditionError
from .series import SeriesRing
from .singularity import LocalRingClass, classify_local_ring, default_truncation

T_VARS = ("t11", "t12", "t21", "t22")


@dataclass
class HodgeFrame:
    """A choice of two basis indices spanning the Hodge filtration VM/pM,
    plus the complementary two indices."""

    module: object
    Y_indices: tuple
    X_indices: tuple

    def __post_init__(self):
        idx = sorted(self.Y_indices) + sorted(self.X_indices)
        if sorted(idx) != [0, 1, 2, 3]:
            raise PreconditionError("frame indices must partition the basis")
        ring = self.module.ring
        fld = ring.field
        vbar = [[ring.residue(x) for x in row] for row in self.module.V_matrix]
        if linalg.rank_field(fld, vbar) != 2:
            raise PreconditionError("V has the wrong mod-p rank for a Hodge frame")
        picked = [[fld.one() if r == i else fld.zero() for i in self.Y_indices] for r in range(4)]
        stacked = [vrow + prow for vrow, prow in zip(vbar, picked)]
        if linalg.rank_field(fld, stacked) != 2:
            raise PreconditionError("chosen Y vectors do not span the image of V mod p")


def standard_frame(module):
    """The frame with Y = (Y1, Y2) basis slots and X = (X1, X2), valid for
    every fixture of make_standard."""
    return HodgeFrame(module, (2, 3), (0, 1))


def relation_ring(witt_ring, degree=None):
    degree = degree or default_truncation(witt_ring.p)
    return SeriesRing(witt_ring, 4, degree, T_VARS)


def expand_pairing(frame, left, right, sring=None, left_vars=(0, 1), right_vars=(2, 3)):
    """<left~, right~> where left~ = e_left + sum_i lv_i X_i and
    right~ = e_right + sum_j rv_j X_j; left/right are basis indices and
    lv/rv pick which of the four t-variables deform each side.

    Exposed separately so alternating consistency (<Y1~, Y1~>, both sides
    carrying the same variable row) is directly assertable.
    """
    module = frame.module
    ring = module.ring
    sring = sring or relation_ring(ring)
    t = sring.variables()  # t11, t12, t21, t22
    lv = [t[k] for k in left_vars]
    rv = [t[k] for k in right_vars]

    def pair(i, j):
        return module.pair(module.basis_vector(i), module.basis_vector(j))

    x1, x2 = frame.X_indices
    rel = sring.constant(pair(left, right))
    # <e_left, rv_j X_j>
    rel = rel + rv[0].scalar_mul(pair(left, x1)) + rv[1].scalar_mul(pair(left, x2))
    # <lv_i X_i, e_right> = -lv_i <e_right, X_i>
    rel = rel - lv[0].scalar_mul(pair(right, x1)) - lv[1].scalar_mul(pair(right, x2))
    # <lv_i X_i, rv_j X_j>
    for i, ti in ((x1, lv[0]), (x2, lv[1])):
        for j, tj in ((x1, rv[0]), (x2, rv[1])):
            c = pair(i, j)
            if c:
                rel = rel + (ti * tj).scalar_mul(c)
    return rel


def deformation_equation(frame, degree=None):
    """The isotropy relation of the deformed filtration, a series of total
    degree <= 2 in t11, t12, t21, t22 over W_n(F_q)."""
    sring = relation_ring(frame.module.ring, degree)
    y1, y2 = frame.Y_indices
    return expand_pairing(frame, y1, y2, sring)


def classify_point(frame, degree=None):
    """Classification of the deformation relation's local ring: Smooth for
    Lagrangian frames, an ordinary double point with v(a') = 1 for the
    superspecial non-Lagrangian fixture."""
    return classify_local_ring(deformation_equation(frame, degree))


# ---------------------------------------------------------------------------
# displays: the equicharacteristic tangent data


@dataclass
class DisplayRelations:
    """The shape F e_i = e_{i+2} + sum_j T_ij e_j, e_{i+2} = V e_i, recorded
    by its 2x2 matrix of variable coefficients over the residue field."""

    ring: SeriesRing  # over F_q, variables t11, t12, t21, t22
    entries: list     # 2x2 matrix of degree-<=1 series with zero constant term

    def __post_init__(self):
        if len(self.entries) != 2 or any(len(r) != 2 for r in self.entries):
            raise PreconditionError("display needs a 2x2 matrix of entries")
        for row in self.entries:
            for s in row:
                if s.parent != self.ring:
                    raise PreconditionError("display entry from a foreign ring")
                if s.constant_term():
                    raise PreconditionError("display entries vanish at the origin")
                if s.degree_bound() > 1:
                    raise PreconditionError("display entries are linear forms")


def standard_display(field, degree=None):
    """The universal display: T_ij is the Teichmuller lift of the
    coordinate t_ij; at the tangent level the matrix of variables."""
    degree = degree or 3
    sring = SeriesRing(field, 4, degree, T_VARS)
    t = sring.variables()
    return DisplayRelations(sring, [[t[0], t[1]], [t[2], t[3]]])


def display_tangent_frobenius(display):
    """Frobenius on the tangent space M~/VM~ read off the display: the 2x2
    matrix of linear forms [[t11, t12], [t21, t22]] for the standard one."""
    return [row[:] for row in display.entries]


def nonordinary_locus(display):
    """Defining polynomial of the non-ordinary locus: the determinant of
    the tangent Frobenius, over F_q[t]."""
    T = display_tangent_frobenius(display)
    return T[0][0] * T[1][1] - T[0][1] * T[1][0]


def reduce_relation_mod_p(relation):
    """Base-change a relation over W_n(F_q) to the residue field F_q."""
    ring = relation.parent.coeff_ring
    return relation.map_coefficients(ring.residue, ring.field)
