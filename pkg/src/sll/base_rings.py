"""Exact arithmetic for finite fields F_q and truncated Witt rings W_n(F_q).

W_n(F_q) is realized as (Z/p^n)[x]/(g) where g is the distinguished monic
lift of the field's defining polynomial whose root class is multiplicative
(g divides x^q - x).  Multiplication is therefore plain polynomial
arithmetic; Witt coordinates (Teichmuller digits) are a conversion layer,
and the classical ghost-component construction is kept alongside as an
independent oracle (`ghost_sum_digits`, `ghost_product_digits`).

Elements are immutable value objects; rings are shareable read-only
contexts; every operation is pure.
"""

from __future__ import annotations

import itertools

from .errors import DomainError, InternalInvariantError, ValidationError

# deterministic moduli for the extension fields the test fixtures use,
# little-endian coefficient tuples, monic
BUILTIN_MODULI = {
    (2, 2): (1, 1, 1),       # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),    # x^3 + x + 1
    (3, 2): (1, 0, 1),       # x^2 + 1
    (5, 2): (2, 0, 1),       # x^2 + 2
}


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficients are plain ints mod p)

def _ptrim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k] % p
        if c:
            for j in range(df + 1):
                a[k - df + j] = (a[k - df + j] - c * f[j]) % p
    return _ptrim(a[:df])


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        lc_inv = pow(b[-1], p - 2, p)
        bm = tuple(c * lc_inv % p for c in b)
        a, b = b, _pmod(a, bm, p)
    return a


def _frob_power(base, k, f, p):
    # base^(p^k) mod f by k successive p-th powers
    g = base
    for _ in range(k):
        h = (1,)
        e = p
        sq = g
        while e:
            if e & 1:
                h = _pmod(_pmul(h, sq, p), f, p)
            sq = _pmod(_pmul(sq, sq, p), f, p)
            e >>= 1
        g = h
    return g


def is_irreducible(poly, p):
    """Irreducibility of a monic polynomial over F_p (degree <= 4 scale)."""
    poly = tuple(c % p for c in poly)
    m = len(poly) - 1
    if m < 1 or poly[-1] != 1:
        return False
    x = (0, 1)
    # x^(p^m) must equal x mod poly
    if _pmod(_frob_power(x, m, poly, p) + (0,) * 0, poly, p) != _pmod(x, poly, p):
        return False
    # no factor of degree m/r for prime r | m
    r = 2
    mm = m
    primes = set()
    while mm > 1:
        while mm % r == 0:
            primes.add(r)
            mm //= r
        r += 1
    for r in primes:
        g = _frob_power(x, m // r, poly, p)
        diff = list(g) + [0] * max(0, 2 - len(g))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(poly, _ptrim(diff), p)) > 1:
            return False
    return True


def find_irreducible(p, m):
    """First monic irreducible of degree m over F_p in lexicographic order."""
    if m == 1:
        return (0, 1)
    if (p, m) in BUILTIN_MODULI:
        return BUILTIN_MODULI[(p, m)]
    for tail in itertools.product(range(p), repeat=m):
        poly = tuple(tail) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise InternalInvariantError(f"no irreducible of degree {m} over F_{p}")


# ---------------------------------------------------------------------------
# finite fields


class FFElement:
    """Element of a FiniteField: the reduced polynomial of degree < m."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, FFElement) or other.field != self.field:
            raise DomainError("operands lie in different fields")

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return FFElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        return FFElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.field.p
        return FFElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        prod = _pmod(_pmul(self.coeffs, other.coeffs, f.p), f.modulus, f.p)
        return FFElement(f, prod + (0,) * (f.m - len(prod)))

    def __pow__(self, e):
        f = self.field
        if e < 0:
            return self.field.invert(self) ** (-e)
        out = f.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FFElement)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"FF({self.field.p}^{self.field.m}; {list(self.coeffs)})"


class FiniteField:
    """F_q = F_p[x]/(modulus), q = p^m, with a fixed monic irreducible modulus."""

    def __init__(self, p, m=1, modulus=None):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if m < 1:
            raise ValidationError("extension degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, m)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValidationError("modulus must be monic of degree m")
        if not is_irreducible(modulus, p):
            raise ValidationError("modulus is reducible over F_p")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.m})"

    def element(self, coeffs):
        if isinstance(coeffs, FFElement):
            if coeffs.field != self:
                raise DomainError("element from a different field")
            return coeffs
        if isinstance(coeffs, int):
            return FFElement(self, ((coeffs % self.p),) + (0,) * (self.m - 1))
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.m:
            red = _pmod(coeffs, self.modulus, self.p)
            coeffs = red
        return FFElement(self, coeffs + (0,) * (self.m - len(coeffs)))

    def zero(self):
        return FFElement(self, (0,) * self.m)

    def one(self):
        return self.element(1)

    def from_int(self, k):
        return self.element(k)

    def gen(self):
        """Residue class of x (a root of the modulus)."""
        if self.m == 1:
            return self.zero()
        return FFElement(self, (0, 1) + (0,) * (self.m - 2))

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.m):
            yield FFElement(self, coeffs)

    def random_element(self, rng):
        return FFElement(self, tuple(rng.randrange(self.p) for _ in range(self.m)))

    def is_unit(self, e):
        return bool(e)

    def invert(self, e):
        if not e:
            raise DomainError("inverting zero")
        return e ** (self.q - 2)

    def in_maximal_ideal(self, e):
        # a field is a local ring with maximal ideal (0)
        return not bool(e)

    def frobenius(self, e):
        return e ** self.p

    def sqrt(self, e):
        """A square root in this field, or None.  Exhaustive search (desk scale)."""
        for c in self.elements():
            if c * c == e:
                return c
        return None

    def extension_quadratic(self):
        """The field F_{q^2} together with the embedding F_q -> F_{q^2}.

        The target modulus is the deterministic irreducible of degree 2m
        over F_p; the embedding sends the generator to the smallest root
        of this field's modulus in the target.
        """
        big = FiniteField(self.p, 2 * self.m)
        root = None
        for cand in big.elements():
            acc = big.zero()
            for c in reversed(self.modulus):
                acc = acc * cand + big.element(c)
            if not acc:
                root = cand
                break
        if root is None:
            raise InternalInvariantError("modulus has no root in quadratic extension")
        return big, FieldEmbedding(self, big, root)

    def to_json(self):
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, doc):
        try:
            return cls(int(doc["p"]), int(doc.get("m", 1)),
                       tuple(doc["modulus"]) if "modulus" in doc else None)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad field document: {exc}") from exc


class FieldEmbedding:
    """Ring embedding F_q -> F_{q'} determined by a root of the source modulus."""

    def __init__(self, src, dst, gen_image):
        self.src = src
        self.dst = dst
        self.gen_image = gen_image
        pows = [dst.one()]
        for _ in range(src.m - 1):
            pows.append(pows[-1] * gen_image)
        self._pows = pows

    def __call__(self, e):
        if e.field != self.src:
            raise DomainError("element not in the source field")
        acc = self.dst.zero()
        for c, pw in zip(e.coeffs, self._pows):
            if c:
                acc = acc + self.dst.element(c) * pw
        return acc


# ---------------------------------------------------------------------------
# truncated Witt rings


class WittElement:
    """Element of W_n(F_q): a reduced polynomial with coefficients mod p^n."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, WittElement) or other.ring != self.ring:
            raise DomainError("operands lie in different Witt rings")

    def __add__(self, other):
        self._check(other)
        pn = self.ring.pn
        return WittElement(self.ring, tuple((a + b) % pn for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        pn = self.ring.pn
        return WittElement(self.ring, tuple((a - b) % pn for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        pn = self.ring.pn
        return WittElement(self.ring, tuple((-a) % pn for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        return WittElement(self.ring, self.ring._mul_coeffs(self.coeffs, other.coeffs))

    def __pow__(self, e):
        if e < 0:
            return self.ring.invert(self) ** (-e)
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, WittElement)
            and other.ring == self.ring
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.ring.field.p, self.ring.field.m, self.ring.n, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"W({self.ring.field.p}^{self.ring.field.m},{self.ring.n}; {list(self.coeffs)})"


class WittRing:
    """W_n(F_q) = (Z/p^n)[x]/(lifted modulus), |W_n(F_q)| = q^n.

    The lifted modulus is the Hensel lift of the field modulus: the unique
    monic lift dividing x^q - x, so the residue class of x is its own
    Teichmuller representative.  Frobenius is x |-> x^p applied by a
    precomputed substitution matrix (O(m^2) per application).
    """

    def __init__(self, field, n):
        if n < 1:
            raise ValidationError("truncation length must be >= 1")
        self.field = field
        self.n = n
        self.p = field.p
        self.pn = field.p ** n
        m = field.m
        self.lifted_modulus = self._lift_modulus()
        # sigma: substitution by x^p, as an m x m matrix over Z/p^n
        xp = self._pow_gen(self.p)
        self._sigma_mat = self._powers_matrix(xp)
        inv = _int_identity(m)
        for _ in range((m - 1) % m if m > 1 else 0):
            inv = _int_matmul(self._sigma_mat, inv, self.pn)
        self._sigma_inv_mat = inv
        gen = self.gen()
        if self.frobenius(gen) ** (field.q // field.p) != gen and field.m > 1:
            # x^q must equal x: the defining Newton iteration is stationary
            raise InternalInvariantError("lifted modulus is not the Hensel lift")

    # -- construction internals ------------------------------------------------

    def _lift_modulus(self):
        """Minimal polynomial over Z/p^n of the Teichmuller lift of the
        field generator, computed inside the naive-lift quotient ring."""
        m, p, pn = self.field.m, self.field.p, self.pn
        naive = tuple(int(c) for c in self.field.modulus)
        if m == 1:
            # the Teichmuller lift t of the root r of x + c satisfies
            # t^p = t; iterate the p-power map on -c
            r = (-naive[0]) % pn
            for _ in range(self.n + 1):
                r = pow(r, p, pn)
            return ((-r) % pn, 1)

        def mul(a, b):
            out = [0] * (2 * m - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] = (out[i + j] + ai * bj) % pn
            for k in range(2 * m - 2, m - 1, -1):
                c = out[k]
                if c:
                    out[k] = 0
                    for j in range(m + 1):
                        out[k - m + j] = (out[k - m + j] - c * naive[j]) % pn
            return tuple(out[:m])

        theta = (0, 1) + (0,) * (m - 2)
        for _ in range(self.n + 1):
            # theta <- theta^q, one digit of convergence per p-power
            acc = theta
            for _ in range(m):
                out = (1,) + (0,) * (m - 1)
                e = p
                sq = acc
                while e:
                    if e & 1:
                        out = mul(out, sq)
                    sq = mul(sq, sq)
                    e >>= 1
                acc = out
            theta = acc
        # columns of B are theta^i; B = Id mod p, hence invertible
        pows = [(1,) + (0,) * (m - 1)]
        for _ in range(m):
            pows.append(mul(pows[-1], theta))
        B = [[pows[j][i] for j in range(m)] for i in range(m)]
        c = _solve_unit_system(B, list(pows[m]), pn, p)
        return tuple((-ci) % pn for ci in c) + (1,)

    def _mul_coeffs(self, a, b):
        m, pn = self.field.m, self.pn
        if m == 1:
            return ((a[0] * b[0]) % pn,)
        g = self.lifted_modulus
        out = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % pn
        for k in range(2 * m - 2, m - 1, -1):
            c = out[k]
            if c:
                out[k] = 0
                for j in range(m + 1):
                    out[k - m + j] = (out[k - m + j] - c * g[j]) % pn
        return tuple(out[:m])

    def _pow_gen(self, e):
        out = self.one().coeffs
        base = self.gen().coeffs
        while e:
            if e & 1:
                out = self._mul_coeffs(out, base)
            base = self._mul_coeffs(base, base)
            e >>= 1
        return out

    def _powers_matrix(self, img):
        """Matrix of the substitution x |-> img on the power basis."""
        m = self.field.m
        cols = [(1,) + (0,) * (m - 1)]
        for _ in range(m - 1):
            cols.append(self._mul_coeffs(cols[-1], img))
        return [[cols[j][i] for j in range(m)] for i in range(m)]

    # -- ring interface ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, WittRing)
            and other.field == self.field
            and other.n == self.n
        )

    def __hash__(self):
        return hash((self.field, self.n))

    def __repr__(self):
        return f"WittRing(F_{self.field.q}, n={self.n})"

    def element(self, coeffs):
        if isinstance(coeffs, WittElement):
            if coeffs.ring != self:
                raise DomainError("element from a different Witt ring")
            return coeffs
        if isinstance(coeffs, int):
            return WittElement(self, ((coeffs % self.pn),) + (0,) * (self.field.m - 1))
        coeffs = tuple(int(c) % self.pn for c in coeffs)
        if len(coeffs) != self.field.m:
            raise ValidationError("coefficient vector has wrong length")
        return WittElement(self, coeffs)

    def zero(self):
        return WittElement(self, (0,) * self.field.m)

    def one(self):
        return self.element(1)

    def from_int(self, k):
        return self.element(k)

    def p_element(self):
        return self.element(self.p)

    def gen(self):
        if self.field.m == 1:
            g = self.lifted_modulus
            return self.element((-g[0]) % self.pn)
        return WittElement(self, (0, 1) + (0,) * (self.field.m - 2))

    def elements(self):
        for coeffs in itertools.product(range(self.pn), repeat=self.field.m):
            yield WittElement(self, coeffs)

    def random_element(self, rng):
        return WittElement(self, tuple(rng.randrange(self.pn) for _ in range(self.field.m)))

    def is_unit(self, x):
        return self.valuation(x) == 0

    def invert(self, x):
        if not self.is_unit(x):
            raise DomainError("inverting a non-unit")
        r = self.residue(x)
        y = self.teichmuller(self.field.invert(r))
        two = self.from_int(2)
        for _ in range(max(1, self.n).bit_length() + 1):
            y = y * (two - x * y)
        if (x * y) != self.one():
            raise InternalInvariantError("unit inversion failed to converge")
        return y

    def in_maximal_ideal(self, x):
        return self.valuation(x) >= 1

    def residue(self, x):
        return self.field.element(tuple(c % self.p for c in x.coeffs))

    def frobenius(self, x):
        return WittElement(self, _int_matvec(self._sigma_mat, x.coeffs, self.pn))

    def frobenius_inv(self, x):
        return WittElement(self, _int_matvec(self._sigma_inv_mat, x.coeffs, self.pn))

    def teichmuller(self, a):
        """The unique multiplicative lift [a] of a in F_q."""
        if a.field != self.field:
            raise DomainError("element not in the residue field")
        y = self.element(tuple(a.coeffs))
        q = self.field.q
        for _ in range(self.n):
            y = y ** q
        return y

    def digits(self, x):
        """Teichmuller digit expansion: x = sum [d_i] p^i, d_i in F_q."""
        coeffs = list(x.coeffs)
        out = []
        for k in range(self.n):
            d = self.field.element(tuple(c % self.p for c in coeffs))
            out.append(d)
            if k == self.n - 1:
                break
            t = self.teichmuller(d).coeffs
            for i in range(len(coeffs)):
                c = (coeffs[i] - t[i]) % self.pn
                if c % self.p:
                    raise InternalInvariantError("digit subtraction not divisible by p")
                coeffs[i] = c // self.p
        return tuple(out)

    def from_digits(self, ds):
        ds = tuple(ds)
        if len(ds) != self.n:
            raise ValidationError("digit vector has wrong length")
        acc = self.zero()
        pk = self.one()
        pe = self.p_element()
        for d in ds:
            acc = acc + self.teichmuller(self.field.element(d) if not isinstance(d, FFElement) else d) * pk
            pk = pk * pe
        return acc

    def valuation(self, x):
        """Index of the first nonzero Teichmuller digit; n means zero at
        this precision.  Equals the minimal p-valuation of the coefficients."""
        v = self.n
        for c in x.coeffs:
            if c:
                w = 0
                while c % self.p == 0:
                    c //= self.p
                    w += 1
                v = min(v, w)
        return v

    def divide_exact_p(self, x, k=1):
        """Divide by p^k.  Requires p^k | x; the result carries only
        n - k trusted digits (caller does the precision bookkeeping)."""
        pk = self.p ** k
        out = []
        for c in x.coeffs:
            if c % pk:
                raise DomainError(f"element not divisible by p^{k}")
            out.append(c // pk)
        return WittElement(self, tuple(out))

    def reduce_precision(self, x, k):
        """The image of x in W_k(F_q) (k <= n)."""
        target = WittRing(self.field, k)
        pk = self.p ** k
        return target.element(tuple(c % pk for c in x.coeffs))

    def to_json(self, x=None):
        doc = {"p": self.p, "m": self.field.m, "n": self.n}
        if x is not None:
            doc["coeffs"] = list(x.coeffs)
        return doc


class WittEmbedding:
    """Ring embedding W_n(F_q) -> W_n(F_{q^2}) over a residue-field embedding.

    Sends the Teichmuller generator of the source to the Teichmuller lift
    of its image root; Z/p^n-linear on polynomial coefficients.
    """

    def __init__(self, src, dst, field_embedding):
        if src.n != dst.n or src.p != dst.p:
            raise DomainError("incompatible Witt rings")
        self.src = src
        self.dst = dst
        self.field_embedding = field_embedding
        root = field_embedding(src.field.gen()) if src.field.m > 1 else dst.field.zero()
        img = dst.teichmuller(root) if src.field.m > 1 else dst.zero()
        pows = [dst.one()]
        for _ in range(src.field.m - 1):
            pows.append(pows[-1] * img)
        self._pows = pows

    def __call__(self, x):
        if x.ring != self.src:
            raise DomainError("element not in the source ring")
        acc = self.dst.zero()
        for c, pw in zip(x.coeffs, self._pows):
            if c:
                acc = acc + self.dst.from_int(c) * pw
        return acc


def witt_quadratic_extension(ring):
    """W_n(F_{q^2}) together with the embedding of W_n(F_q)."""
    big_field, femb = ring.field.extension_quadratic()
    big = WittRing(big_field, ring.n)
    return big, WittEmbedding(ring, big, femb)


def sqrt_unit(ring, u):
    """Square root of a unit in W_n(F_q) for odd p, or None if the residue
    is a non-square.  Field root by exhaustive search, then Hensel lifting
    (the derivative 2x is a unit since p is odd)."""
    if ring.p == 2:
        raise DomainError("Hensel square roots need odd p")
    if not ring.is_unit(u):
        raise DomainError("square roots only for units")
    r0 = ring.field.sqrt(ring.residue(u))
    if r0 is None:
        return None
    z = ring.teichmuller(r0)
    for _ in range(max(1, ring.n).bit_length() + 1):
        z = z - (z * z - u) * ring.invert(z + z)
    if z * z != u:
        raise InternalInvariantError("Hensel square root failed to converge")
    return z


# ---------------------------------------------------------------------------
# ghost-component oracle
#
# The classical Witt-vector construction, computed over the naive integral
# lift Lambda = Z[x]/(modulus), entirely with exact integer arithmetic.
# Independent of the polynomial-representation arithmetic above: it only
# reads Teichmuller digit vectors and returns the digits the universal Witt
# sum/product polynomials prescribe.


def _lam_mul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    dm = len(mod) - 1
    for k in range(len(out) - 1, dm - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for j in range(dm + 1):
                out[k - dm + j] -= c * mod[j]
    out = out[:dm]
    return tuple(out) + (0,) * (dm - len(out))


def _lam_pow(a, e, mod):
    dm = len(mod) - 1
    out = (1,) + (0,) * (dm - 1)
    base = a
    while e:
        if e & 1:
            out = _lam_mul(out, base, mod)
        base = _lam_mul(base, base, mod)
        e >>= 1
    return out


def _ghost_vector(lifts, p, n, mod):
    ghosts = []
    for k in range(n):
        w = tuple(0 for _ in range(len(mod) - 1))
        for i in range(k + 1):
            term = _lam_pow(lifts[i], p ** (k - i), mod)
            w = tuple(a + (p ** i) * t for a, t in zip(w, term))
        ghosts.append(w)
    return ghosts


def _ghost_solve(ghosts, p, n, mod):
    comps = []
    for k in range(n):
        num = ghosts[k]
        for i in range(k):
            term = _lam_pow(comps[i], p ** (k - i), mod)
            num = tuple(a - (p ** i) * t for a, t in zip(num, term))
        pk = p ** k
        for c in num:
            if c % pk:
                raise InternalInvariantError("ghost solve-back lost integrality")
        comps.append(tuple(c // pk for c in num))
    return comps


def _witt_coordinates(ring, x):
    """Classical Witt coordinates of x: the Teichmuller expansion
    x = sum p^i [d_i] has coordinates x_i = d_i^(p^i); the two agree over
    prime fields."""
    out = []
    for i, d in enumerate(ring.digits(x)):
        for _ in range(i):
            d = ring.field.frobenius(d)
        out.append(d)
    return out


def _coordinates_to_digits(field, coords):
    out = []
    for i, c in enumerate(coords):
        # p-th root is frobenius^(m-1); invert the i-fold twist
        for _ in range(i * (field.m - 1) % field.m if field.m > 1 else 0):
            c = field.frobenius(c)
        out.append(c)
    return tuple(out)


def _ghost_binary(a, b, combine):
    ring = a.ring
    if b.ring != ring:
        raise DomainError("operands lie in different Witt rings")
    p, n = ring.p, ring.n
    mod = tuple(int(c) for c in ring.field.modulus)
    la = [tuple(int(c) for c in d.coeffs) for d in _witt_coordinates(ring, a)]
    lb = [tuple(int(c) for c in d.coeffs) for d in _witt_coordinates(ring, b)]
    ga = _ghost_vector(la, p, n, mod)
    gb = _ghost_vector(lb, p, n, mod)
    gc = [combine(x, y) for x, y in zip(ga, gb)]
    comps = _ghost_solve(gc, p, n, mod)
    coords = [ring.field.element(tuple(c % p for c in comp)) for comp in comps]
    return _coordinates_to_digits(ring.field, coords)


def ghost_sum_digits(a, b):
    """Digits of a + b predicted by the ghost-component construction."""
    return _ghost_binary(a, b, lambda x, y: tuple(u + v for u, v in zip(x, y)))


def ghost_product_digits(a, b):
    """Digits of a * b predicted by the ghost-component construction."""
    mod = tuple(int(c) for c in a.ring.field.modulus)
    return _ghost_binary(a, b, lambda x, y: _lam_mul(x, y, mod))


# ---------------------------------------------------------------------------
# small integer linear algebra mod p^n (construction-time only)


def _int_identity(m):
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def _int_matmul(A, B, pn):
    m = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(m)) % pn for j in range(m)] for i in range(m)]


def _int_matvec(A, v, pn):
    m = len(A)
    return tuple(sum(A[i][k] * v[k] for k in range(m)) % pn for i in range(m))


def _solve_unit_system(B, v, pn, p):
    """Solve B c = v over Z/p^n where B is invertible mod p."""
    m = len(B)
    A = [row[:] + [v[i]] for i, row in enumerate(B)]
    for col in range(m):
        piv = next((r for r in range(col, m) if A[r][col] % p), None)
        if piv is None:
            raise InternalInvariantError("system is singular mod p")
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, pn)
        A[col] = [(x * inv) % pn for x in A[col]]
        for r in range(m):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(x - f * y) % pn for x, y in zip(A[r], A[col])]
    return [A[i][m] % pn for i in range(m)]
