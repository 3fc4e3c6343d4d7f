"""Finite fields F_{l^r} with canonical moduli, and polynomial factorization.

A field element is a residue polynomial in the generator `a`, stored as a
coefficient tuple of length r.  The defining modulus of F_{l^r} is the
lexicographically least monic irreducible polynomial of degree r over F_l,
comparing coefficient vectors low degree first, so fields are reproducible
across runs and machines.

Polynomials over a field are plain lists of FqElem, lowest degree first.
Factorization is squarefree decomposition, then distinct-degree splitting,
then equal-degree splitting with a pseudo-random source seeded to 0, so
factor lists come out in a fixed order.
"""

import itertools
import random
from functools import lru_cache

from sympy import factorint, isprime

from .arith import xgcd


# ---------------------------------------------------------------------------
# polynomials over the prime field, as int lists (used for modulus search)

def _zpoly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _zpoly_mulmod(f, g, mod, p):
    deg = len(mod) - 1
    prod = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                prod[i + j] = (prod[i + j] + a * b) % p
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            for j in range(deg + 1):
                prod[i - deg + j] = (prod[i - deg + j] - c * mod[j]) % p
        prod.pop()
    return _zpoly_trim(prod)


def _zpoly_powmod_x(e, mod, p):
    # x^e mod (mod), coefficients mod p
    result = [1]
    base = [0, 1]
    if len(mod) == 2:
        base = [(-mod[0]) % p]
    while e:
        if e & 1:
            result = _zpoly_mulmod(result, base, mod, p)
        base = _zpoly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _zpoly_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        inv = pow(g[-1], -1, p)
        g = [c * inv % p for c in g]
        deg_f, deg_g = len(f) - 1, len(g) - 1
        while deg_f >= deg_g and f:
            c = f[-1]
            if c:
                for j in range(deg_g + 1):
                    f[deg_f - deg_g + j] = (f[deg_f - deg_g + j] - c * g[j]) % p
            f.pop()
            _zpoly_trim(f)
            deg_f = len(f) - 1
        f, g = g, f
    return f


def _is_irreducible_zpoly(f, p):
    # f monic over F_p; Rabin test: x^(p^r) = x mod f and
    # gcd(x^(p^(r/t)) - x, f) = 1 for prime t | r.
    r = len(f) - 1
    if r == 0:
        return False
    if r == 1:
        return True
    if f[0] == 0:
        return False
    if _zpoly_powmod_x(p ** r, f, p) != [0, 1]:
        return False
    for t in factorint(r):
        h = list(_zpoly_powmod_x(p ** (r // t), f, p))
        while len(h) < 2:
            h.append(0)
        h[1] = (h[1] - 1) % p
        _zpoly_trim(h)
        if not h or len(_zpoly_gcd(f, h, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _canonical_modulus(ell, r):
    if r == 1:
        return (0, 1)
    for tail in itertools.product(range(ell), repeat=r):
        f = list(tail) + [1]
        if _is_irreducible_zpoly(f, ell):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# fields and elements

class FqField:
    """The finite field with ell^r elements, ell prime."""

    __slots__ = ("ell", "r", "modulus", "_xpows", "_primitive", "_card_factors")

    def __init__(self, ell, r, modulus):
        self.ell = ell
        self.r = r
        self.modulus = modulus
        # reductions of a^r .. a^(2r-2) modulo the defining polynomial
        xpows = []
        cur = [(-c) % ell for c in modulus[:-1]]
        xpows.append(tuple(cur))
        for _ in range(r - 2):
            cur = [0] + cur
            lead = cur.pop()
            if lead:
                cur = [(c - lead * m) % ell for c, m in zip(cur, modulus[:-1])]
            xpows.append(tuple(cur))
        self._xpows = tuple(xpows)
        self._primitive = None
        self._card_factors = None

    @property
    def order(self):
        return self.ell ** self.r

    def zero(self):
        return FqElem(self, (0,) * self.r)

    def one(self):
        return FqElem(self, (1,) + (0,) * (self.r - 1))

    def gen(self):
        """The residue class of x, a root of the defining modulus."""
        if self.r == 1:
            return self.zero()
        return FqElem(self, (0, 1) + (0,) * (self.r - 2))

    def __call__(self, value):
        """Coerce an integer or a coefficient sequence into the field."""
        if isinstance(value, FqElem):
            if value.field is not self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, int):
            return self.from_int(value)
        coeffs = tuple(int(c) % self.ell for c in value)
        if len(coeffs) > self.r:
            raise ValueError("coefficient vector too long")
        return FqElem(self, coeffs + (0,) * (self.r - len(coeffs)))

    def from_int(self, value):
        """Image of an integer in the prime subfield."""
        return FqElem(self, (value % self.ell,) + (0,) * (self.r - 1))

    def from_encoding(self, code):
        """Inverse of FqElem.encoding()."""
        coeffs = []
        for _ in range(self.r):
            code, c = divmod(code, self.ell)
            coeffs.append(c)
        return FqElem(self, tuple(coeffs))

    def elements(self):
        """Iterate over all elements in encoding order (small fields only)."""
        for code in range(self.order):
            yield self.from_encoding(code)

    def card_factors(self):
        """Factorization of the multiplicative group order ell^r - 1."""
        if self._card_factors is None:
            self._card_factors = dict(factorint(self.order - 1))
        return self._card_factors

    def primitive_element(self):
        """Least generator of the multiplicative group, in encoding order."""
        if self._primitive is None:
            q1 = self.order - 1
            facs = list(self.card_factors())
            code = 2
            while True:
                x = self.from_encoding(code)
                if not x.is_zero() and all(
                    x ** (q1 // p) != self.one() for p in facs
                ):
                    self._primitive = x
                    break
                code += 1
        return self._primitive

    def __eq__(self, other):
        return (
            isinstance(other, FqField)
            and self.ell == other.ell
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.ell, self.modulus))

    def __repr__(self):
        return "FqField(%d, %d)" % (self.ell, self.r)


@lru_cache(maxsize=None)
def fq_field(ell, r):
    """Canonical field with ell^r elements; same (ell, r) gives one object."""
    if ell < 2 or not isprime(ell):
        raise ValueError("characteristic must be prime, got %d" % ell)
    if r < 1:
        raise ValueError("degree must be positive")
    return FqField(ell, r, _canonical_modulus(ell, r))


class FqElem:
    """An element of an FqField, as a residue polynomial in the generator."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def encoding(self):
        """Integer code sum(c_i * ell^i); fixes a total order on the field."""
        code = 0
        for c in reversed(self.coeffs):
            code = code * self.field.ell + c
        return code

    def __add__(self, other):
        f = self.field
        return FqElem(f, tuple((a + b) % f.ell for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        f = self.field
        return FqElem(f, tuple((a - b) % f.ell for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        f = self.field
        return FqElem(f, tuple(-a % f.ell for a in self.coeffs))

    def __mul__(self, other):
        f = self.field
        ell, r = f.ell, f.r
        a, b = self.coeffs, other.coeffs
        if r == 1:
            return FqElem(f, (a[0] * b[0] % ell,))
        prod = [0] * (2 * r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = prod[:r]
        for i in range(r, 2 * r - 1):
            c = prod[i]
            if c:
                red = f._xpows[i - r]
                for j in range(r):
                    out[j] += c * red[j]
        return FqElem(f, tuple(c % ell for c in out))

    def __pow__(self, e):
        f = self.field
        if e < 0:
            return self.inverse() ** (-e)
        result = f.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        f = self.field
        if f.r == 1:
            return FqElem(f, (pow(self.coeffs[0], -1, f.ell),))
        # extended Euclid on residue polynomial and the modulus
        ell = f.ell
        a = _zpoly_trim(list(self.coeffs))
        if not a:
            raise ZeroDivisionError("inverse of zero")
        b = list(f.modulus)
        s0, s1 = [1], []
        while b:
            inv = pow(b[-1], -1, ell)
            q = []
            rem = list(a)
            while len(rem) >= len(b) and rem:
                c = rem[-1] * inv % ell
                shift = len(rem) - len(b)
                while len(q) <= shift:
                    q.append(0)
                q[shift] = c
                for j in range(len(b)):
                    rem[shift + j] = (rem[shift + j] - c * b[j]) % ell
                rem.pop()
                _zpoly_trim(rem)
            # s0 - q*s1
            qs1 = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] = (qs1[i + j] + qi * sj) % ell
            new_s = [( (s0[i] if i < len(s0) else 0) - (qs1[i] if i < len(qs1) else 0)) % ell
                     for i in range(max(len(s0), len(qs1), 1))]
            _zpoly_trim(new_s)
            a, b = b, rem
            s0, s1 = s1, new_s
        # a is now gcd (degree 0 since modulus irreducible)
        lead_inv = pow(a[0], -1, ell)
        inv_coeffs = [c * lead_inv % ell for c in s0]
        inv_coeffs += [0] * (f.r - len(inv_coeffs))
        return FqElem(f, tuple(inv_coeffs[: f.r]))

    def __truediv__(self, other):
        return self * other.inverse()

    def frobenius(self):
        """The image under x -> x^ell."""
        return self ** self.field.ell

    def multiplicative_order(self):
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        order = self.field.order - 1
        one = self.field.one()
        for p in self.field.card_factors():
            while order % p == 0 and self ** (order // p) == one:
                order //= p
        return order

    def minpoly(self):
        """Monic minimal polynomial over the prime field, as an int list."""
        f = self.field
        ell = f.ell
        # find the first linear dependence among 1, x, x^2, ...
        rows = []  # echelon rows: (pivot, normalized vector, combination)
        power = f.one()
        for d in range(f.r + 1):
            vec = list(power.coeffs)
            combo = [0] * (f.r + 2)
            combo[d] = 1
            for pivot, rvec, rcombo in rows:
                c = vec[pivot]
                if c:
                    vec = [(a - c * b) % ell for a, b in zip(vec, rvec)]
                    combo = [(a - c * b) % ell for a, b in zip(combo, rcombo)]
            nz = next((i for i, a in enumerate(vec) if a), None)
            if nz is None:
                lead_inv = pow(combo[d], -1, ell)
                return [c * lead_inv % ell for c in combo[: d + 1]]
            inv = pow(vec[nz], -1, ell)
            rows.append((nz, [a * inv % ell for a in vec],
                         [c * inv % ell for c in combo]))
            power = power * self
        raise RuntimeError("minimal polynomial not found")  # unreachable

    def __eq__(self, other):
        return (
            isinstance(other, FqElem)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.ell, self.field.modulus, self.coeffs))

    def __repr__(self):
        return "FqElem(%d^%d, %s)" % (self.field.ell, self.field.r, fq_str(self))


def fq_str(x):
    """Readable polynomial string for a field element, in the generator a."""
    terms = []
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("a" if c == 1 else "%d*a" % c)
        else:
            terms.append("a^%d" % i if c == 1 else "%d*a^%d" % (c, i))
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# polynomials over a finite field, as FqElem lists (lowest degree first)

def poly_trim(f):
    while f and f[-1].is_zero():
        f.pop()
    return f


def poly_degree(f):
    return len(f) - 1


def poly_monic(f):
    if not f:
        return f
    inv = f[-1].inverse()
    return [c * inv for c in f]


def poly_add(f, g):
    field = (f or g)[0].field
    n = max(len(f), len(g))
    zero = field.zero()
    out = [(f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero)
           for i in range(n)]
    return poly_trim(out)


def poly_sub(f, g):
    return poly_add(f, [-c for c in g])


def poly_mul(f, g):
    if not f or not g:
        return []
    field = f[0].field
    out = [field.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a.is_zero():
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_divmod(f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    field = g[0].field
    rem = list(f)
    inv = g[-1].inverse()
    q = [field.zero()] * max(len(f) - len(g) + 1, 0)
    while len(rem) >= len(g) and rem:
        c = rem[-1] * inv
        shift = len(rem) - len(g)
        q[shift] = c
        for j in range(len(g)):
            rem[shift + j] = rem[shift + j] - c * g[j]
        rem.pop()
        poly_trim(rem)
    return poly_trim(q), rem


def poly_mod(f, g):
    return poly_divmod(f, g)[1]


def poly_gcd(f, g):
    f, g = list(f), list(g)
    while g:
        f, g = g, poly_mod(f, g)
    return poly_monic(f)


def poly_powmod(f, e, mod):
    field = mod[0].field
    result = [field.one()]
    base = poly_mod(f, mod)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base), mod)
        base = poly_mod(poly_mul(base, base), mod)
        e >>= 1
    return result


def poly_deriv(f):
    if len(f) <= 1:
        return []
    field = f[0].field
    return poly_trim([f[i] * field.from_int(i) for i in range(1, len(f))])


def poly_eval(f, x):
    field = x.field
    acc = field.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_from_ints(field, coeffs):
    """Build a polynomial from integer coefficients (lowest degree first)."""
    return poly_trim([field.from_int(c) for c in coeffs])


def _poly_pth_root(f, field):
    # f = g(x^ell) over F_{ell^r}; return g (ell-th root of each coefficient)
    ell, r = field.ell, field.r
    root_exp = ell ** (r - 1) if r > 1 else 1
    out = []
    for i in range(0, len(f), ell):
        out.append(f[i] ** root_exp if r > 1 else f[i])
    return poly_trim(out)


def squarefree_decomposition(f):
    """List of (squarefree factor, multiplicity) with product f (monic)."""
    field = f[0].field
    ell = field.ell
    f = poly_monic(list(f))
    out = []

    def accumulate(g, mult):
        if poly_degree(g) > 0:
            out.append((g, mult))

    def sff(f, mult):
        d = poly_deriv(f)
        if not d:
            # f is an ell-th power
            sff(_poly_pth_root(f, field), mult * ell)
            return
        c = poly_gcd(f, d)
        w, _ = poly_divmod(f, c)
        i = 1
        while poly_degree(w) > 0:
            y = poly_gcd(w, c)
            fac, _ = poly_divmod(w, y)
            accumulate(fac, mult * i)
            w = y
            c, _ = poly_divmod(c, y)
            i += 1
        if poly_degree(c) > 0:
            sff(c, mult)

    sff(f, 1)
    merged = {}
    for g, m in out:
        key = tuple(c.coeffs for c in g)
        if key in merged:
            merged[key] = (g, merged[key][1] + m)
        else:
            merged[key] = (g, m)
    return sorted(merged.values(), key=lambda gm: (poly_degree(gm[0]), [c.encoding() for c in gm[0]]))


def _distinct_degree(f):
    # f monic squarefree; yield (product of degree-d irreducibles, d)
    field = f[0].field
    q = field.order
    out = []
    x = [field.zero(), field.one()]
    h = list(x)
    rest = list(f)
    d = 0
    while poly_degree(rest) > 0:
        d += 1
        if 2 * d > poly_degree(rest):
            out.append((rest, poly_degree(rest)))
            break
        h = poly_powmod(h, q, rest)
        g = poly_gcd(poly_sub(h, x), rest)
        if poly_degree(g) > 0:
            out.append((g, d))
            rest, _ = poly_divmod(rest, g)
            h = poly_mod(h, rest)
    return out


def _equal_degree(f, d, rng):
    # Cantor-Zassenhaus split of a monic squarefree product of degree-d factors.
    field = f[0].field
    n = poly_degree(f)
    if n == d:
        return [f]
    q = field.order
    one = [field.one()]
    while True:
        h = [field.from_encoding(rng.randrange(q)) for _ in range(n)]
        h = poly_trim(h)
        if poly_degree(h) < 1:
            continue
        g = poly_gcd(h, f)
        if 0 < poly_degree(g) < n:
            pass
        else:
            e = (q ** d - 1) // 2
            t = poly_powmod(h, e, f)
            g = poly_gcd(poly_sub(t, one), f)
            if not (0 < poly_degree(g) < n):
                continue
        rest, _ = poly_divmod(f, g)
        return _equal_degree(g, d, rng) + _equal_degree(rest, d, rng)


def poly_factor_fq(f):
    """Factor a nonzero polynomial over its field of coefficients.

    Returns a list of (monic irreducible factor, multiplicity), sorted by
    degree then by coefficient encodings; the product of the factors times
    the leading coefficient of f reproduces f.
    """
    f = poly_trim(list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    field = f[0].field
    if field.ell == 2:
        raise NotImplementedError("even characteristic is not supported")
    rng = random.Random(0)
    factors = []
    for sq, mult in squarefree_decomposition(f):
        for prod_d, d in _distinct_degree(sq):
            for irr in _equal_degree(prod_d, d, rng):
                factors.append((poly_monic(irr), mult))
    factors.sort(key=lambda gm: (poly_degree(gm[0]), [c.encoding() for c in gm[0]]))
    return factors


def poly_roots(f):
    """Roots of f in its coefficient field, sorted by encoding."""
    roots = []
    for g, _ in poly_factor_fq(f):
        if poly_degree(g) == 1:
            roots.append(-g[0] * g[1].inverse())
    return sorted(roots, key=lambda x: x.encoding())


def element_of_order(field, m):
    """Canonical element of multiplicative order m in the field.

    Taken as g^((q-1)/m) for g the least primitive element, so compatible
    powers give compatible roots of unity for every divisor of m.
    """
    q1 = field.order - 1
    if m <= 0 or q1 % m:
        raise ValueError("no element of order %d in %r" % (m, field))
    return field.primitive_element() ** (q1 // m)


def embed_field(small, big):
    """Embedding of one canonical field into a larger one.

    Returns a function mapping elements of `small` into `big`, sending the
    generator to the least root of the small modulus in the big field.
    Requires small.r | big.r and equal characteristic.
    """
    if small.ell != big.ell or big.r % small.r:
        raise ValueError("no embedding of %r into %r" % (small, big))
    if small.r == 1:
        return lambda x: big.from_int(x.coeffs[0])
    if small == big:
        return lambda x: x
    modulus = poly_from_ints(big, small.modulus)
    root = poly_roots(modulus)[0]
    powers = [big.one()]
    for _ in range(small.r - 1):
        powers.append(powers[-1] * root)

    def phi(x):
        acc = big.zero()
        for c, pw in zip(x.coeffs, powers):
            if c:
                acc = acc + big.from_int(c) * pw
        return acc

    return phi
