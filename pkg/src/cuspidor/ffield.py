"""Exact GF(p^m) arithmetic, multiplicative characters, Gauss sums.

Moduli are chosen deterministically, Conway style: the lexicographically
least monic irreducible polynomial whose root x is primitive and whose
powers norm down compatibly to the generators of all proper subfields.
Elements are coefficient tuples over Z/p; a discrete-log table is built
eagerly (fields here stay small, q <= 10^6).
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

from .cyclotomic import Cyc, cyc_sum
from .errors import InvalidOrder, TrivialCharacter


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_rem(out, modulus, p)


def _poly_rem(a, modulus, p):
    a = list(a)
    m = len(modulus) - 1
    for i in range(len(a) - 1, m - 1, -1):
        c = a[i]
        if c:
            for j in range(m + 1):
                a[i - m + j] = (a[i - m + j] - c * modulus[j]) % p
    a = a[:m]
    while len(a) < m:
        a.append(0)
    return tuple(a)


def _poly_pow_mod(a, e, modulus, p):
    result = (1,) + (0,) * (len(modulus) - 2)
    base = _poly_rem(a, modulus, p)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, modulus, p)
        base = _poly_mul_mod(base, base, modulus, p)
        e >>= 1
    return result


def _is_irreducible(modulus, p):
    """Rabin test: x^(p^m) = x and gcd-degree checks via x^(p^(m/r)) != x."""
    m = len(modulus) - 1
    x = (0, 1) + (0,) * (m - 2) if m >= 2 else (0,)
    if m == 1:
        return True
    xq = _poly_pow_mod(x, p ** m, modulus, p)
    if xq != _poly_rem(x, modulus, p):
        return False
    for r in {f for f in _prime_factors(m)}:
        xr = _poly_pow_mod(x, p ** (m // r), modulus, p)
        if xr == _poly_rem(x, modulus, p):
            return False
    return True


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def _conway_modulus(p: int, m: int):
    """Deterministic primitive modulus with norm-compatible subfield chain."""
    if m == 1:
        for c in range(p):
            root = (-c) % p
            if root and _mult_order(root, p) == p - 1:
                return (c, 1)
        raise ArithmeticError("no primitive root found")
    subgens = {}
    for d in range(1, m):
        if m % d == 0:
            sub = _conway_modulus(p, d)
            subgens[d] = sub
    q = p ** m
    for coeffs in itertools.product(range(p), repeat=m):
        modulus = coeffs + (1,)
        if modulus[0] == 0:
            continue
        if not _is_irreducible(modulus, p):
            continue
        x = (0, 1) + (0,) * (m - 2)
        if not _element_is_primitive(x, modulus, p, q):
            continue
        ok = True
        for d, submod in subgens.items():
            y = _poly_pow_mod(x, (q - 1) // (p ** d - 1), modulus, p)
            # y must be a root of the degree-d modulus
            if not _poly_eval_in_field(submod, y, modulus, p):
                ok = False
                break
        if ok:
            return modulus
    raise ArithmeticError("no Conway-style modulus found")


def _poly_eval_in_field(poly, y, modulus, p):
    """Is poly(y) == 0 inside GF(p)[x]/modulus?"""
    acc = (0,) * (len(modulus) - 1)
    one = (1,) + (0,) * (len(modulus) - 2)
    power = one
    for c in poly:
        if c:
            term = tuple((c * t) % p for t in power)
            acc = tuple((a + b) % p for a, b in zip(acc, term))
        power = _poly_mul_mod(power, y, modulus, p)
    return all(c == 0 for c in acc)


def _mult_order(a: int, p: int) -> int:
    o, x = 1, a % p
    while x != 1:
        x = (x * a) % p
        o += 1
    return o


def _element_is_primitive(x, modulus, p, q):
    for r in _prime_factors(q - 1):
        if _poly_pow_mod(x, (q - 1) // r, modulus, p) == (1,) + (0,) * (len(modulus) - 2):
            return False
    return True


class FiniteField:
    """GF(p^m) with a fixed primitive generator and eager dlog table."""

    MAX_ENUM = 10 ** 6

    def __init__(self, p: int, m: int = 1):
        if not _is_prime(p) or p == 2:
            raise ValueError("p must be an odd prime")
        if m < 1:
            raise ValueError("degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p ** m
        if self.q > self.MAX_ENUM:
            raise ValueError("field too large for dlog table")
        self.modulus = _conway_modulus(p, m)
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)
        if m == 1:
            self.generator = ((-self.modulus[0]) % p,)
        else:
            self.generator = (0, 1) + (0,) * (m - 2)
        self._dlog = {}
        x = self.one
        for e in range(self.q - 1):
            self._dlog[x] = e
            x = self.mul(x, self.generator)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        return _poly_mul_mod(a, b, self.modulus, self.p)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError
        return self.power(a, self.q - 2)

    def power(self, a, e: int):
        if e < 0:
            return self.power(self.inv(a), -e)
        return _poly_pow_mod(a, e, self.modulus, self.p)

    def from_int(self, k: int):
        """The prime-field element k, embedded."""
        return ((k % self.p),) + (0,) * (self.m - 1)

    def elements(self):
        yield self.zero
        x = self.one
        for _ in range(self.q - 1):
            yield x
            x = self.mul(x, self.generator)

    def units(self):
        x = self.one
        for _ in range(self.q - 1):
            yield x
            x = self.mul(x, self.generator)

    def dlog(self, a) -> int:
        if a == self.zero:
            raise ZeroDivisionError("dlog of zero")
        return self._dlog[a]

    def gen_power(self, e: int):
        return self.power(self.generator, e % (self.q - 1))

    def sgn(self, a) -> int:
        """Quadratic character of the unit a: +1 square, -1 nonsquare."""
        return -1 if self.dlog(a) % 2 else 1

    # -- subfield structure ------------------------------------------------

    def trace_to_subfield(self, a, qsub: int):
        """tr over the subfield of size qsub; result stays in this field."""
        d = self._subfield_degree(qsub)
        out = self.zero
        x = a
        for _ in range(d):
            out = self.add(out, x)
            x = self.power(x, qsub)
        return out

    def norm_to_subfield(self, a, qsub: int):
        d = self._subfield_degree(qsub)
        out = self.one
        x = a
        for _ in range(d):
            out = self.mul(out, x)
            x = self.power(x, qsub)
        return out

    def _subfield_degree(self, qsub: int) -> int:
        d = 0
        qq = 1
        while qq < self.q:
            qq *= qsub
            d += 1
        if qq != self.q:
            raise ValueError("not a subfield size")
        return d

    def subfield_dlog(self, a, sub: "FiniteField") -> int:
        """dlog of a subfield element w.r.t. the subfield's own generator.

        Uses the norm-compatible embedding gen_sub -> gen^( (q-1)/(qsub-1) ).
        """
        if a == self.zero:
            raise ZeroDivisionError
        e = self.dlog(a)
        step = (self.q - 1) // (sub.q - 1)
        if e % step:
            raise ValueError("element is not in the subfield")
        return e // step

    def absolute_trace(self, a):
        """Trace down to the prime field, as an integer mod p."""
        t = self.trace_to_subfield(a, self.p)
        return t[0]


def additive_character(field: FiniteField, scale: int = 1):
    """Lambda0(x) = zeta_p^(scale * tr(x)); nontrivial iff p does not divide scale."""
    if scale % field.p == 0:
        raise TrivialCharacter("additive character scale divisible by p")

    def chi(a) -> Cyc:
        return Cyc.zeta(field.p, scale * field.absolute_trace(a))

    return chi


class MultCharacter:
    """x -> zeta_N^(e * dlog x) on the units of a finite field."""

    def __init__(self, field: FiniteField, order: int, power: int = 1):
        if order < 1 or (field.q - 1) % order:
            raise InvalidOrder(f"order {order} does not divide q-1 = {field.q - 1}")
        self.field = field
        self.order = order
        self.power = power % order if order > 1 else 0

    def __call__(self, a) -> Cyc:
        e = self.field.dlog(a)
        return Cyc.zeta(self.order, self.power * e) if self.order > 1 else Cyc.rational(1)

    def value_qz(self, a) -> Fraction:
        """The character value as an element of Q/Z."""
        e = self.field.dlog(a)
        return Fraction(self.power * e, self.order) % 1 if self.order > 1 else Fraction(0)

    def is_trivial(self) -> bool:
        return self.order == 1 or self.power % self.order == 0


def mult_character(field: FiniteField, order: int) -> MultCharacter:
    """The canonical character of exact order ``order`` (quadratic = sgn)."""
    return MultCharacter(field, order, 1)


class GaussSumResult:
    __slots__ = ("sum", "normalized_square", "alternate_agrees")

    def __init__(self, s: Cyc, normalized_square: int, alternate_agrees: bool):
        self.sum = s
        self.normalized_square = normalized_square
        self.alternate_agrees = alternate_agrees


def gauss_sum(ell: FiniteField, additive=None) -> GaussSumResult:
    """Unnormalized quadratic Gauss sum g = sum sgn(x) Lambda0(tr x).

    Returns g together with the verified payload: g * conj(g) = q exactly
    (so q^{-1/2} g has absolute value 1), and the alternate expression
    sum_x Lambda0(tr(x^2)) agrees with g.
    """
    chi = additive if additive is not None else additive_character(ell)
    terms = []
    alt = [chi(ell.zero)]
    for x in ell.units():
        v = chi(x)
        terms.append(v if ell.sgn(x) == 1 else -v)
        alt.append(chi(ell.mul(x, x)))
    g = cyc_sum(terms)
    g2 = cyc_sum(alt)
    gg = g.norm_square()
    if not (gg.is_rational() and gg.rational_value() == ell.q):
        raise ArithmeticError("Gauss sum modulus check failed")
    return GaussSumResult(g, ell.q, (g == g2))


def normalized_gauss_value(ell: FiniteField) -> Cyc:
    """The root of unity or quartic unit G with g = G * sqrt(q).

    Exact: determined by testing g^2 = q (G = ±1) or g^2 = -q (G = ±i)
    and comparing g against the explicit candidate times sqrt(q), which is
    itself expressed exactly via the prime-field Gauss sum.
    """
    g = gauss_sum(ell).sum
    gsq = (g * g)
    if not gsq.is_rational():
        raise ArithmeticError("unexpected Gauss sum square")
    val = gsq.rational_value()
    # sqrt(q) as an exact cyclotomic: q = p^m, sqrt(q) = p^(m//2) * sqrt(p)^(m%2)
    p, m = ell.p, ell.m
    root = Cyc.rational(p ** (m // 2))
    if m % 2:
        gp = gauss_sum(FiniteField(p, 1)).sum
        # Gauss: gp = sqrt(p) if p=1 mod 4, i*sqrt(p) if p=3 mod 4
        sqrtp = gp if p % 4 == 1 else gp * Cyc.zeta(4, 3)
        root = root * sqrtp
    for cand in (Cyc.rational(1), Cyc.rational(-1), Cyc.zeta(4, 1), Cyc.zeta(4, 3)):
        if (cand * cand).is_rational():
            s = (cand * cand).rational_value() * ell.q
            if s == val and g == cand * root:
                return cand
    raise ArithmeticError("normalized Gauss value not identified")
