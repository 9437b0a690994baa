"""Small dense exact linear algebra over the package's coefficient rings.

Matrices are lists of row lists of ring elements.  The ring object must
provide zero(), one(), is_unit(e), invert(e); elements support +, -, *.
Over a local ring, Gaussian elimination always pivots on units, which is
sufficient for every invertible matrix this package meets (invertibility
mod the maximal ideal).
"""

from __future__ import annotations

from .errors import DomainError, InternalInvariantError


def identity(ring, n):
    z, o = ring.zero(), ring.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zeros(ring, rows, cols):
    z = ring.zero()
    return [[z for _ in range(cols)] for _ in range(rows)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = A[i][0] * B[0][j]
            for k in range(1, inner):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        acc = row[0] * v[0]
        for a, x in zip(row[1:], v[1:]):
            acc = acc + a * x
        out.append(acc)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A):
    return [[-a for a in row] for row in A]


def mat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_map(A, f):
    return [[f(a) for a in row] for row in A]


def scalar_mul(c, A):
    return [[c * a for a in row] for row in A]


def det(ring, A):
    """Determinant by cofactor expansion; exact over any commutative ring."""
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    acc = ring.zero()
    sign = True
    for j in range(n):
        c = A[0][j]
        if c:
            minor = [row[:j] + row[j + 1:] for row in A[1:]]
            term = c * det(ring, minor)
            acc = acc + term if sign else acc - term
        sign = not sign
    return acc


def invert(ring, A):
    """Inverse of a matrix that is invertible modulo the maximal ideal."""
    n = len(A)
    work = [row[:] + idr[:] for row, idr in zip(A, identity(ring, n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if ring.is_unit(work[r][col])), None)
        if piv is None:
            raise DomainError("matrix is not invertible over the local ring")
        work[col], work[piv] = work[piv], work[col]
        inv = ring.invert(work[col][col])
        work[col] = [inv * x for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def solve(ring, A, b):
    """Solve A x = b for A invertible modulo the maximal ideal."""
    return mat_vec(invert(ring, A), b)


def rank_field(field, A):
    """Rank of a matrix over a finite field, by row reduction."""
    work = [row[:] for row in A]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = field.invert(work[rank][col])
        work[rank] = [inv * x for x in work[rank]]
        for r in range(rows):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def rref_field(field, A):
    """Reduced row echelon form over a finite field; returns (rref, pivots)."""
    work = [row[:] for row in A]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = field.invert(work[rank][col])
        work[rank] = [inv * x for x in work[rank]]
        for r in range(rows):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
        if rank == rows:
            break
    return work, pivots


def smith_form_local(ring, A):
    """Smith normal form over W_n(F_q), where every elementary divisor is a
    power of p.  Returns (divisor valuations, U, V) with U A V = diag(p^v).

    U, V are invertible; entries of the diagonal beyond min(rows, cols)
    valuations are reported as ring.n (zero at this precision).
    """
    rows, cols = len(A), len(A[0])
    S = [row[:] for row in A]
    U = identity(ring, rows)
    V = identity(ring, cols)
    vals = []
    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = ring.valuation(S[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None or best[0] >= ring.n:
            vals.extend([ring.n] * (min(rows, cols) - t))
            break
        v, bi, bj = best
        S[t], S[bi] = S[bi], S[t]
        U[t], U[bi] = U[bi], U[t]
        for row in S:
            row[t], row[bj] = row[bj], row[t]
        for row in V:
            row[t], row[bj] = row[bj], row[t]
        # normalize pivot to exactly p^v
        unit = ring.divide_exact_p(S[t][t], v)
        uinv = ring.invert(unit)
        S[t] = [uinv * x for x in S[t]]
        U[t] = [uinv * x for x in U[t]]
        for i in range(t + 1, rows):
            if ring.valuation(S[i][t]) < ring.n:
                f = ring.divide_exact_p(S[i][t], v)
                S[i] = [x - f * y for x, y in zip(S[i], S[t])]
                U[i] = [x - f * y for x, y in zip(U[i], U[t])]
        for j in range(t + 1, cols):
            if ring.valuation(S[t][j]) < ring.n:
                f = ring.divide_exact_p(S[t][j], v)
                for row in S:
                    row[j] = row[j] - f * row[t]
                for vrow in V:
                    vrow[j] = vrow[j] - f * vrow[t]
        vals.append(v)
    if len(vals) != min(rows, cols):
        raise InternalInvariantError("smith form bookkeeping error")
    return vals, U, V
