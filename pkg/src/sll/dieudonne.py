"""Rank-4 quasi-polarized Dieudonne modules over W_n(F_q).

Conventions (fixed throughout the package):
  * covariant: F is sigma-semilinear, V is sigma^{-1}-semilinear,
    FV = VF = p;
  * operators act by matrix times twisted coordinates:
    F(x) = F_matrix . sigma(x), V(x) = V_matrix . sigma^{-1}(x), so the
    matrix columns are the images of the basis vectors and FV = p becomes
    the clean identity F_matrix . sigma(V_matrix) = p . Id;
  * the pairing is <x, y> = x^T J y with J alternating of determinant
    unit * p^2 (elementary divisors 1, 1, p, p);
  * the p-rank is computed as the stable rank of F mod p (etale summands
    contribute bijective F-bar, multiplicative and local-local summands
    nilpotent F-bar), validated against the standard fixtures.

The dual lattice is represented integrally as p*M^t to avoid fractional
entries; every containment test runs at precision n-1, one digit below
full precision, which is why constructors demand n >= 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg
from .base_rings import WittRing
from .errors import DomainError, PreconditionError, ValidationError

X1, X2, Y1, Y2 = 0, 1, 2, 3

STANDARD_CASES = ("iia", "iib", "ordinary", "lagrangian_generic", "mixed", "supersingular_a1")


class DieudonneModule:
    """Free rank-4 module with semilinear F, V and an alternating pairing."""

    def __init__(self, ring, F_matrix, V_matrix, J):
        if not isinstance(ring, WittRing):
            raise DomainError("Dieudonne modules live over Witt rings")
        self.ring = ring
        self.rank = 4
        self.F_matrix = [[ring.element(x) for x in row] for row in F_matrix]
        self.V_matrix = [[ring.element(x) for x in row] for row in V_matrix]
        self.J = [[ring.element(x) for x in row] for row in J]

    # -- operator and pairing actions -------------------------------------

    def apply_F(self, vec):
        return linalg.mat_vec(self.F_matrix, [self.ring.frobenius(x) for x in vec])

    def apply_V(self, vec):
        return linalg.mat_vec(self.V_matrix, [self.ring.frobenius_inv(x) for x in vec])

    def pair(self, x, y):
        acc = self.ring.zero()
        for i, xi in enumerate(x):
            if xi:
                row = self.J[i]
                for j, yj in enumerate(y):
                    if yj:
                        acc = acc + xi * row[j] * yj
        return acc

    def basis_vector(self, i):
        return [self.ring.one() if j == i else self.ring.zero() for j in range(4)]

    def sigma_matrix(self, A):
        return linalg.mat_map(A, self.ring.frobenius)

    def sigma_inv_matrix(self, A):
        return linalg.mat_map(A, self.ring.frobenius_inv)

    # -- validation ---------------------------------------------------------

    def validate(self):
        """Named checks for every structural invariant."""
        ring = self.ring
        p_id = linalg.scalar_mul(ring.p_element(), linalg.identity(ring, 4))
        fv = linalg.mat_mul(self.F_matrix, self.sigma_matrix(self.V_matrix))
        vf = linalg.mat_mul(self.V_matrix, self.sigma_inv_matrix(self.F_matrix))
        alternating = all(
            self.J[i][j] == -self.J[j][i] for i in range(4) for j in range(4)
        ) and all(not self.J[i][i] for i in range(4))
        # elementary-divisor valuations (0, 0, 1, 1): det J = unit p^2 and
        # rank 2 mod p, stated in a form that survives n = 2
        divisors, _, _ = linalg.smith_form_local(ring, [row[:] for row in self.J])
        jbar = [[ring.residue(x) for x in row] for row in self.J]
        ftj = linalg.mat_mul(linalg.transpose(self.F_matrix), self.J)
        jv = self.sigma_matrix(linalg.mat_mul(self.J, self.V_matrix))
        return {
            "fv_is_p": linalg.mat_eq(fv, p_id),
            "vf_is_p": linalg.mat_eq(vf, p_id),
            "alternating": alternating,
            "polarization_degree_p2": divisors == [0, 0, 1, 1]
            and linalg.rank_field(ring.field, jbar) == 2,
            "fv_pairing_compatible": linalg.mat_eq(ftj, jv),
        }

    def is_valid(self):
        return all(self.validate().values())

    # -- serialization --------------------------------------------------------

    def to_json(self):
        def enc(A):
            return [[list(x.coeffs) for x in row] for row in A]

        return {
            "ring": {
                "p": self.ring.p,
                "m": self.ring.field.m,
                "n": self.ring.n,
                "modulus": list(self.ring.field.modulus),
            },
            "F": enc(self.F_matrix),
            "V": enc(self.V_matrix),
            "J": enc(self.J),
        }

    @classmethod
    def from_json(cls, doc):
        from .base_rings import FiniteField

        try:
            rdoc = doc["ring"]
            fld = FiniteField(
                int(rdoc["p"]), int(rdoc.get("m", 1)),
                tuple(rdoc["modulus"]) if "modulus" in rdoc else None,
            )
            ring = WittRing(fld, int(rdoc["n"]))
            mats = []
            for key in ("F", "V", "J"):
                rows = doc[key]
                if len(rows) != 4 or any(len(r) != 4 for r in rows):
                    raise ValidationError(f"{key} must be a 4x4 matrix")
                mats.append([[ring.element(tuple(x) if isinstance(x, list) else x)
                              for x in row] for row in rows])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad module document: {exc}") from exc
        return cls(ring, *mats)


def make_standard(ring, case):
    """The standard fixtures, in the basis order (X1, X2, Y1, Y2).

    iia:  F X1 = Y1, F Y1 = -p X1 (same on the 2-block), <X1,Y1> = 1,
          <X2,Y2> = p; superspecial, Lagrangian.
    iib:  F X1 = Y1, F Y1 = p X1, <X1,X2> = 1, <Y1,Y2> = p; superspecial.
    ordinary: split etale x multiplicative model.
    lagrangian_generic / mixed: block product of an ordinary elliptic block
          and a supersingular one, carrying the same pairing as iia.
    supersingular_a1: supersingular with a-number 1 (odd p only).
    """
    if ring.n < 2:
        raise PreconditionError("dual-lattice tests need one spare digit: n >= 2")
    p = ring.p
    if case == "iia":
        F = [[0, 0, -p, 0], [0, 0, 0, -p], [1, 0, 0, 0], [0, 1, 0, 0]]
        V = [[0, 0, p, 0], [0, 0, 0, p], [-1, 0, 0, 0], [0, -1, 0, 0]]
        J = [[0, 0, 1, 0], [0, 0, 0, p], [-1, 0, 0, 0], [0, -p, 0, 0]]
    elif case == "iib":
        F = [[0, 0, p, 0], [0, 0, 0, p], [1, 0, 0, 0], [0, 1, 0, 0]]
        V = F
        J = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, p], [0, 0, -p, 0]]
    elif case == "ordinary":
        F = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, p, 0], [0, 0, 0, p]]
        V = [[p, 0, 0, 0], [0, p, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        J = [[0, 0, 1, 0], [0, 0, 0, p], [-1, 0, 0, 0], [0, -p, 0, 0]]
    elif case in ("lagrangian_generic", "mixed"):
        F = [[1, 0, 0, 0], [0, 0, 0, p], [0, 0, p, 0], [0, -1, 0, 0]]
        V = [[p, 0, 0, 0], [0, 0, 0, -p], [0, 0, 1, 0], [0, 1, 0, 0]]
        J = [[0, 0, 1, 0], [0, 0, 0, p], [-1, 0, 0, 0], [0, -p, 0, 0]]
    elif case == "supersingular_a1":
        if p == 2:
            raise PreconditionError("the a-number-1 fixture needs odd p")
        F = [[0, 0, 0, -p], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, p, 0]]
        V = [[0, p, 0, 0], [0, 0, p, 0], [0, 0, 0, 1], [-1, 0, 0, 0]]
        J = [[0, 1, 0, 1], [-1, 0, p, 0], [0, -p, 0, p], [-1, 0, -p, 0]]
    else:
        raise ValidationError(f"unknown standard case {case!r}; choose from {STANDARD_CASES}")
    module = DieudonneModule(ring, F, V, J)
    bad = [k for k, ok in module.validate().items() if not ok]
    if bad:
        raise ValidationError(f"fixture {case} violates invariants: {bad}")
    return module


# ---------------------------------------------------------------------------
# invariants


def _mod_p_matrix(module, A):
    ring = module.ring
    return [[ring.residue(x) for x in row] for row in A]


def a_number(module):
    """dim of M / (F, V)M = 4 - rank of the mod-p columns of [F | V]."""
    fbar = _mod_p_matrix(module, module.F_matrix)
    vbar = _mod_p_matrix(module, module.V_matrix)
    combined = [frow + vrow for frow, vrow in zip(fbar, vbar)]
    return 4 - linalg.rank_field(module.ring.field, combined)


def p_rank(module):
    """Dimension of the stable image of the semilinear reduction F-bar."""
    fld = module.ring.field
    fbar = _mod_p_matrix(module, module.F_matrix)
    basis = linalg.identity(fld, 4)
    span = [list(row) for row in zip(*basis)]
    for _ in range(4):
        images = [linalg.mat_vec(fbar, [fld.frobenius(c) for c in v]) for v in span]
        reduced, _ = linalg.rref_field(fld, images)
        span = [row for row in reduced if any(row)]
        if not span:
            return 0
    return len(span)


@dataclass
class DualLattice:
    """Integral description of p * M^t: column i pairs as <b_i / p, e_j> =
    delta_ij.  Entries are trusted to precision n-1 only."""

    module: DieudonneModule
    basis_matrix: list
    precision: int

    def columns(self):
        return [[self.basis_matrix[i][j] for i in range(4)] for j in range(4)]


def dual_lattice(module):
    """p * M^t inside M, as the columns of p * J^{-T}.

    Computed through the Smith form J = U^{-1} diag(p^v) V^{-1}, so
    p J^{-1} = V diag(p^{1-v}) U stays integral with no division; the
    identity B^T J = p * Id holds exactly at the working precision.  For
    the paramodular degree (divisors 1, 1, p, p) a representative of the
    true dual is pinned only to precision n-1; a principal pairing keeps
    full precision and gives p * M^t = p * M."""
    ring = module.ring
    if ring.n < 2:
        raise PreconditionError("dual lattice needs n >= 2")
    vals, U, V = linalg.smith_form_local(ring, [row[:] for row in module.J])
    if vals not in ([0, 0, 1, 1], [0, 0, 0, 0]):
        raise PreconditionError("pairing is not of polarization degree 1 or p^2")
    scale = [[ring.from_int(ring.p ** (1 - v)) if i == j else ring.zero()
              for j in range(4)] for i, v in enumerate(vals)]
    p_jinv = linalg.mat_mul(V, linalg.mat_mul(scale, U))
    B = linalg.transpose(p_jinv)
    precision = ring.n - 1 if vals == [0, 0, 1, 1] else ring.n
    return DualLattice(module, B, precision)


@dataclass
class KernelType:
    """Polarization-kernel dichotomy at a-number 2."""

    tag: str  # AlphaSquare | NonAlphaSquare | NotSuperspecial

    def __eq__(self, other):
        if isinstance(other, str):
            return self.tag == other
        return isinstance(other, KernelType) and other.tag == self.tag


def kernel_type(module):
    """AlphaSquare iff F(p M^t) and V(p M^t) land in p M, tested at
    precision n-1; modules with a-number != 2 are NotSuperspecial."""
    if module.ring.n < 2:
        raise PreconditionError("kernel type needs n >= 2")
    if a_number(module) != 2:
        return KernelType("NotSuperspecial")
    dual = dual_lattice(module)
    for col in dual.columns():
        for image in (module.apply_F(col), module.apply_V(col)):
            # precision n-1 >= 1, so residues of the entries are trusted
            if any(module.ring.residue(x) for x in image):
                return KernelType("NonAlphaSquare")
    return KernelType("AlphaSquare")


# ---------------------------------------------------------------------------
# Lagrangian witness search


@dataclass
class LagrangianWitness:
    Y1: list
    Y2: list
    X1: list
    X2: list


@dataclass
class LagrangianSearchResult:
    found: bool
    witness: LagrangianWitness = None
    precision: int = 0
    nodes: int = 0
    message: str = ""


def _vm_membership_data(module):
    """Smith data of V_matrix: x in VM iff (U x)_i = 0 mod p^{v_i}."""
    vals, U, _ = linalg.smith_form_local(module.ring, [row[:] for row in module.V_matrix])
    return vals, U


def _in_vm_mod(module, vals, U, vec, k):
    """Membership in VM modulo p^k."""
    ring = module.ring
    coords = linalg.mat_vec(U, vec)
    for v, c in zip(vals, coords):
        if ring.valuation(c) < min(v, k):
            return False
    return True


def _complete_witness(module, g1, g2):
    """Try to complete an isotropic direct-summand pair to the full
    pairing shape <X1,Y1> = 1, <X2,Y2> = p, all other pairings zero."""
    ring = module.ring
    A = [[module.pair(module.basis_vector(j), g) for g in (g1, g2)] for j in range(4)]
    vals, U, V = linalg.smith_form_local(ring, A)
    if vals != [0, 1]:
        return None
    y1 = [g1[i] * V[0][0] + g2[i] * V[1][0] for i in range(4)]
    y2 = [g1[i] * V[0][1] + g2[i] * V[1][1] for i in range(4)]
    x1 = list(U[0])
    x2 = list(U[1])
    c = module.pair(x1, x2)
    if c:
        x2 = [a - c * b for a, b in zip(x2, y1)]
    basis = [x1, x2, y1, y2]
    gram = [[module.pair(u, v) for v in basis] for u in basis]
    expect = [
        [0, 0, 1, 0],
        [0, 0, 0, ring.p],
        [-1, 0, 0, 0],
        [0, -ring.p, 0, 0],
    ]
    expect = [[ring.from_int(x) for x in row] for row in expect]
    if not linalg.mat_eq(gram, expect):
        return None
    if not ring.is_unit(linalg.det(ring, basis)):
        return None
    return LagrangianWitness(y1, y2, x1, x2)


def lagrangian_witness_search(module, max_nodes=None):
    """Digit-by-digit backtracking search for a rank-2 direct summand
    L <= VM, isotropic at full precision, completable to the standard
    pairing shape.  A found witness is a proof; exhaustion is evidence
    only, since finite precision cannot certify non-liftability."""
    ring = module.ring
    n = ring.n
    field = ring.field
    vals, U = _vm_membership_data(module)
    field_elts = sorted(field.elements(), key=lambda e: e.coeffs)
    nodes = 0

    def assemble(pivots, frees, digit_lists):
        g1 = [ring.zero()] * 4
        g2 = [ring.zero()] * 4
        g1[pivots[0]] = ring.one()
        g2[pivots[1]] = ring.one()
        for s, (slot_idx, pos) in enumerate(frees):
            digs = list(digit_lists[s]) + [field.zero()] * (n - len(digit_lists[s]))
            vec = g1 if slot_idx == 0 else g2
            vec[pos] = ring.from_digits(digs)
        return g1, g2

    for pivots in itertools.combinations(range(4), 2):
        nonpivot = [j for j in range(4) if j not in pivots]
        # free slots: (generator, position); generator 0 carries pivot[0]
        frees = [(0, nonpivot[0]), (0, nonpivot[1]), (1, nonpivot[0]), (1, nonpivot[1])]

        def dfs(level, digit_lists):
            nonlocal nodes
            if max_nodes is not None and nodes > max_nodes:
                return None
            g1, g2 = assemble(pivots, frees, digit_lists)
            prec = min(level, n)
            if prec:
                if not _in_vm_mod(module, vals, U, g1, prec):
                    return None
                if not _in_vm_mod(module, vals, U, g2, prec):
                    return None
                if ring.valuation(module.pair(g1, g2)) < prec:
                    return None
            if level == n:
                if ring.valuation(module.pair(g1, g2)) < n:
                    return None
                witness = _complete_witness(module, g1, g2)
                return witness
            for combo in itertools.product(field_elts, repeat=4):
                nodes += 1
                if max_nodes is not None and nodes > max_nodes:
                    return None
                new_lists = [digit_lists[s] + [combo[s]] for s in range(4)]
                got = dfs(level + 1, new_lists)
                if got is not None:
                    return got
            return None

        witness = dfs(0, [[], [], [], []])
        if witness is not None:
            return LagrangianSearchResult(
                True, witness, n, nodes, "witness found (proof of the pairing shape)"
            )
    return LagrangianSearchResult(
        False, None, n, nodes,
        f"no witness at precision {n}; exhaustion is evidence, not a proof",
    )


# ---------------------------------------------------------------------------
# base change (used by the isomorphism-invariance tests)


def base_change(module, g):
    """The module in the new basis given by an invertible matrix g:
    F -> g^{-1} F sigma(g), V -> g^{-1} V sigma^{-1}(g), J -> g^T J g."""
    ring = module.ring
    ginv = linalg.invert(ring, g)
    F = linalg.mat_mul(ginv, linalg.mat_mul(module.F_matrix, module.sigma_matrix(g)))
    V = linalg.mat_mul(ginv, linalg.mat_mul(module.V_matrix, module.sigma_inv_matrix(g)))
    J = linalg.mat_mul(linalg.transpose(g), linalg.mat_mul(module.J, g))
    return DieudonneModule(ring, F, V, J)
