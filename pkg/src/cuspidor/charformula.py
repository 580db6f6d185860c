"""Depth-zero character-sum evaluation in the finite model.

Per twist-orbit of roots: the orbit type (symmetric iff it contains the
negative), the residue splitting field GF(q^d), the quadratic character
standing in for the unramified chi-data, and the square class of the scale
factor a determined by the squared Gauss-sum normalization.  delta_II is the
exact product of the per-orbit quadratic values and theta_sum is the
Weyl-summed character value.

Leading constants (Kottwitz sign, Weyl discriminant, epsilon factor) are
local-constant quantities outside the finite model and enter only as
caller-supplied symbolic defaults.

The full character identities themselves are not desk-checkable (they need
p-adic harmonic analysis on both sides); the module's guarantees are
the square-class well-definedness of delta_II and the Weyl reindexing
invariance of theta_sum, which the acceptance suite sweeps.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyc
from .errors import InvalidWeylSet, NotRealizable, OutOfScope, SingularRoot
from .exactcore import QV
from .ffield import FiniteField
from .torus import FrobeniusTorus, TorusCharacter, _prime_power

ASYMMETRIC = "asymmetric"
SYMMETRIC_UNRAMIFIED = "symmetric-unramified"
SYMMETRIC_RAMIFIED = "symmetric-ramified"


class ChiOrbit:
    __slots__ = ("rep", "roots", "kind", "degree")

    def __init__(self, rep, roots, kind, degree):
        self.rep = rep
        self.roots = roots
        self.kind = kind
        self.degree = degree

    def to_json(self):
        return {"rep": list(self.rep), "size": len(self.roots),
                "kind": self.kind, "degree": self.degree}


class ChiData:
    __slots__ = ("torus", "orbits")

    def __init__(self, torus, orbits):
        self.torus = torus
        self.orbits = orbits

    def symmetric_orbits(self):
        return [o for o in self.orbits if o.kind == SYMMETRIC_UNRAMIFIED]

    def to_json(self):
        return [o.to_json() for o in self.orbits]


def classify_chi_data(torus: FrobeniusTorus, strict: bool = True) -> ChiData:
    """Orbit types of the twist acting on the roots.

    Symmetric iff the orbit of alpha contains -alpha; every symmetric orbit
    in this finite model is unramified (the residue world has no ramified
    quadratic extensions), so strict mode never rejects model-built tori;
    externally declared ramified data raise OutOfScope when strict.
    """
    rd = torus.rd
    w = torus.w.matrix
    seen = set()
    orbits = []
    for a in rd.roots:
        if a in seen:
            continue
        orbit = [a]
        seen.add(a)
        cur = tuple(w.apply(a))
        while cur != a:
            orbit.append(cur)
            seen.add(cur)
            cur = tuple(w.apply(cur))
        neg = tuple(-x for x in a)
        kind = SYMMETRIC_UNRAMIFIED if neg in orbit else ASYMMETRIC
        orbits.append(ChiOrbit(a, tuple(orbit), kind, len(orbit)))
    if strict and any(o.kind == SYMMETRIC_RAMIFIED for o in orbits):
        raise OutOfScope("ramified symmetric orbits are out of strict scope")
    return ChiData(torus, orbits)


class ModAData:
    """Per symmetric orbit: depth 0 and the square class of a_alpha."""

    __slots__ = ("torus", "classes", "depth")

    def __init__(self, torus, classes):
        self.torus = torus
        self.classes = classes  # orbit rep -> +1 / -1 (square / nonsquare)
        self.depth = 0

    def sign(self, rep):
        return self.classes[tuple(rep)]

    def to_json(self):
        return {str(list(k)): v for k, v in self.classes.items()}


def composite_character_qz(theta: TorusCharacter, coroot, degree: int):
    """theta∘N∘alpha_vee on k_d^x as a Q/Z-valued function of the dlog."""
    base = theta.composite_with_coroot(coroot, degree)

    def psi(e: int) -> Fraction:
        return (e * base) % 1

    return base, psi


def mod_a_data(theta: TorusCharacter, chi: ChiData = None,
               validate_bound: int = 2500) -> ModAData:
    """Square classes of the depth-zero a-data.

    The defining relation cannot hold pointwise at depth zero; the class is
    pinned by the squared Gauss-sum form of the chi-data normalization:
    sgn(a) g(psi)^2 = (-1)^((q_pm - 1)/2) q_alpha, and since g(psi)^2 =
    psi(-1) q_alpha for symmetric composites this gives sgn(a) =
    psi(-1) (-1)^((q_pm - 1)/2).  The Gauss identity is verified exactly for
    fields up to ``validate_bound``.
    """
    t = theta.torus
    rd = t.rd
    if chi is None:
        chi = classify_chi_data(t)
    classes = {}
    for orbit in chi.symmetric_orbits():
        d = orbit.degree
        if d % 2:
            raise ArithmeticError("symmetric orbit of odd size")
        coroot = rd.coroot(orbit.rep)
        base, psi = composite_character_qz(theta, coroot, d)
        if base == 0:
            raise SingularRoot("theta∘N∘alpha_vee is trivial on the orbit field")
        q_alpha = t.q ** d
        q_half = t.q ** (d // 2)
        psi_minus_one = psi((q_alpha - 1) // 2)
        if psi_minus_one not in (0, Fraction(1, 2)):
            raise ArithmeticError("psi(-1) is not a sign")
        s1 = 1 if psi_minus_one == 0 else -1
        s2 = -1 if (q_half - 1) // 2 % 2 else 1
        sign = s1 * s2
        if q_alpha <= validate_bound:
            _validate_gauss_identity(t, base, d, sign, s2)
        classes[tuple(orbit.rep)] = sign
    return ModAData(t, classes)


def _validate_gauss_identity(t, base, d, sign, s2):
    """g(psi)^2 = psi(-1) q exactly, so sgn(a) g(psi)^2 = (+-) q as claimed."""
    p, e = _prime_power(t.q)
    field = FiniteField(p, e * d)
    order = base.denominator
    if (field.q - 1) % order:
        raise ArithmeticError("composite character order does not divide q^d - 1")
    from .ffield import MultCharacter, additive_character
    psi = MultCharacter(field, order, int(base * order) % order)
    lam = additive_character(field)
    g = sum((psi(x) * lam(x) for x in field.units()), Cyc.rational(0))
    gsq = g * g
    want = Cyc.rational(field.q) if psi(field.neg(field.one)) == Cyc.rational(1) \
        else Cyc.rational(-field.q)
    if not (gsq == want):
        raise ArithmeticError("Gauss square identity fails")
    lhs = gsq * Fraction(sign)
    rhs = Cyc.rational(s2 * field.q)
    if not (lhs == rhs):
        raise ArithmeticError("a-data normalization identity fails")


class DeltaResult:
    __slots__ = ("value", "skipped_orbits", "factors")

    def __init__(self, value, skipped_orbits, factors):
        self.value = value
        self.skipped_orbits = skipped_orbits
        self.factors = factors

    def to_json(self):
        return {"value": _cyc_json(self.value),
                "skipped": [list(r) for r in self.skipped_orbits],
                "factors": {str(list(k)): v for k, v in self.factors.items()}}


def _cyc_json(c: Cyc):
    r = c.reduce()
    return {"conductor": r.n, "coeffs": [str(x) for x in r.coeffs]}


def delta_II(theta: TorusCharacter, gamma: QV, chi: ChiData, a: ModAData,
             field: FiniteField = None) -> DeltaResult:
    """Product over orbits of sgn((alpha(gamma) - 1)/a_alpha), exactly.

    Asymmetric orbits contribute 1; orbits with alpha(gamma) = 1 are skipped
    and reported, mirroring the product's own condition.  Only the square
    class of a enters; representatives within one orbit agree under the
    convention a_{-alpha} = -a_alpha.
    """
    t = theta.torus
    rd = t.rd
    m = t.splitting_degree
    p, e = _prime_power(t.q)
    if field is None:
        field = FiniteField(p, e * m)
    value = Cyc.rational(1)
    skipped = []
    factors = {}
    for orbit in chi.orbits:
        if orbit.kind != SYMMETRIC_UNRAMIFIED:
            continue
        f = _orbit_factor(t, rd, orbit, orbit.rep, gamma, a, field)
        if f is None:
            skipped.append(orbit.rep)
            continue
        factors[tuple(orbit.rep)] = f
        value = value * Fraction(f)
    return DeltaResult(value, skipped, factors)


def _orbit_factor(t, rd, orbit, rep, gamma, a: ModAData, field, rep_sign=1):
    """sgn((alpha(gamma)-1)/a) for one orbit representative, or None."""
    pairing = rd.pairing_row(rep)
    val = sum((Fraction(r) * c for r, c in zip(pairing, gamma.coords)),
              Fraction(0)) % 1
    m = t.splitting_degree
    card = field.q - 1
    if card % val.denominator:
        raise NotRealizable("alpha(gamma) does not live in the splitting field")
    x = field.gen_power(val.numerator * (card // val.denominator))
    if x == field.one:
        return None
    num = field.sub(x, field.one)
    sgn = field.sgn(num) * a.sign(orbit.rep) * rep_sign
    return sgn


def delta_II_at_representative(theta, gamma, chi, a, orbit, rep,
                               field: FiniteField = None):
    """The orbit factor evaluated at any representative of the orbit.

    Implements a_{w^j alpha} = Frobenius transport (same square class) and
    a_{-alpha} = -a_alpha.
    """
    t = theta.torus
    rd = t.rd
    p, e = _prime_power(t.q)
    if field is None:
        field = FiniteField(p, e * t.splitting_degree)
    if tuple(rep) not in {tuple(r) for r in orbit.roots}:
        raise ValueError("representative not in the orbit")
    # rep is either a w-translate of orbit.rep (a transports by Frobenius,
    # same square class) or of its negative (a transports with a sign)
    cur = tuple(orbit.rep)
    translates = set()
    for _ in range(orbit.degree):
        translates.add(cur)
        cur = tuple(t.w.matrix.apply(cur))
    sign_flip = 1 if tuple(rep) in translates else -1
    f = _orbit_factor(t, rd, orbit, rep, gamma, a, field)
    if f is None:
        return None
    if sign_flip == -1:
        f = f * field.sgn(field.neg(field.one))
    return f


def theta_sum(theta: TorusCharacter, gamma: QV, chi: ChiData, a: ModAData,
              weyl_set, field: FiniteField = None,
              leading: Fraction = Fraction(1)) -> Cyc:
    """sum over w of delta_II(gamma^w) theta(gamma^w), exactly.

    ``weyl_set`` is the finite model of N(S,G)(F)/S(F): matrices commuting
    with the twist.  The leading constants (Kottwitz sign, discriminant,
    epsilon factor) default to 1 and scale the result symbolically.
    """
    t = theta.torus
    p, e = _prime_power(t.q)
    if field is None:
        field = FiniteField(p, e * t.splitting_degree)
    acc = Cyc.rational(0)
    for m in weyl_set:
        mc = t.rd.cochar_coord_matrix(m)
        if mc * t.w_cochar != t.w_cochar * mc:
            raise InvalidWeylSet("weyl element does not commute with the twist")
        gw = QV(mc.inverse().to_int().apply(gamma.coords))
        d = delta_II(theta, gw, chi, a, field)
        acc = acc + d.value * Cyc.from_qz(theta.on_vector(gw))
    return acc * leading
