"""Extensions 1 -> A -> B -> C -> 1 of finite abelian groups.

An ExtensionDescriptor carries the action of C on A and a normalized
2-cocycle; ConcreteGroup realizes B on pairs (a, c).  The module decides
multiplicity one through the commutator function in coinvariants
and computes the full irreducible census through stabilizers and
projective-representation dimensions; the independent character-table
oracle lives in dixon.py.
"""

from __future__ import annotations

import itertools
import random

from .errors import NotEquivariant, TooLarge
from .exactcore import FinAb, Mat, coinvariants


class ExtensionDescriptor:
    """1 -> A -> B -> C -> 1 with C-action matrices and a normalized cocycle.

    ``action[j]`` is the matrix (in A's normal-form coordinates) by which the
    j-th generator of C acts; ``cocycle`` maps pairs of C-elements to
    A-elements.  The twisted 2-cocycle identity is validated on construction.
    """

    def __init__(self, a_factors, c_factors, action, cocycle, validate=True):
        self.A = FinAb.abstract(a_factors)
        self.C = FinAb.abstract(c_factors)
        self.action = tuple(action)
        self._action_cache = {}
        self._act_values = {}
        if len(self.action) != len(self.C.factors):
            raise ValueError("one action matrix per C generator")
        raw = dict(cocycle) if not callable(cocycle) else {
            (c1, c2): cocycle(c1, c2)
            for c1 in self.C.elements() for c2 in self.C.elements()}
        self.cocycle = self._normalize(raw)
        if validate:
            self._validate()

    # -- plumbing ------------------------------------------------------------

    def act(self, c, a):
        """The action of the C-element c on the A-element a (memoized)."""
        key = (tuple(c), tuple(a))
        out = self._act_values.get(key)
        if out is not None:
            return out
        m = self._action_cache.get(key[0])
        if m is None:
            m = Mat.identity(len(self.A.factors))
            for g, e in zip(self.action, c):
                for _ in range(e):
                    m = g * m
            self._action_cache[key[0]] = m
        out = self.A.apply_matrix(m, a)
        self._act_values[key] = out
        return out

    def z(self, c1, c2):
        return self.cocycle[(tuple(c1), tuple(c2))]

    def _normalize(self, raw):
        """Shift by the constant coboundary so z(1,.) = z(.,1) = 0."""
        zero_a = self.A.zero
        z11 = tuple(raw.get((self.C.zero, self.C.zero), zero_a))
        out = {}
        for c1 in self.C.elements():
            for c2 in self.C.elements():
                v = tuple(raw.get((c1, c2), zero_a))
                if z11 != zero_a:
                    v = self.A.add(v, self.A.neg(self.act(c1, z11)))
                out[(c1, c2)] = v
        return out

    def _validate(self):
        if self.order() > 4096:
            raise TooLarge("extension too large to validate")
        cs = list(self.C.elements())
        zero = self.A.zero
        for c in cs:
            if self.z(self.C.zero, c) != zero or self.z(c, self.C.zero) != zero:
                raise ValueError("cocycle is not normalized")
        # action must be by automorphisms and define a C-action
        for g in self.action:
            if not self.A.is_automorphism(g):
                raise ValueError("action matrix is not an automorphism")
        for g in self.action:
            for h in self.action:
                for a in _gens(self.A):
                    x = self.A.apply_matrix(g, self.A.apply_matrix(h, a))
                    y = self.A.apply_matrix(h, self.A.apply_matrix(g, a))
                    if x != y:
                        raise ValueError("action matrices must commute on A")
        for j, g in enumerate(self.action):
            m = Mat.identity(len(self.A.factors))
            for _ in range(self.C.factors[j]):
                m = g * m
            for a in _gens(self.A):
                if self.A.apply_matrix(m, a) != a:
                    raise ValueError("action order incompatible with C")
        # twisted cocycle identity
        if len(cs) ** 3 <= 200000:
            triples = itertools.product(cs, repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.choice(cs), rng.choice(cs), rng.choice(cs))
                       for _ in range(5000))
        for c1, c2, c3 in triples:
            lhs = self.A.add(self.act(c1, self.z(c2, c3)),
                             self.z(c1, self.C.add(c2, c3)))
            rhs = self.A.add(self.z(c1, c2), self.z(self.C.add(c1, c2), c3))
            if lhs != rhs:
                raise ValueError("2-cocycle identity fails")

    def order(self) -> int:
        return self.A.order * self.C.order

    def to_json(self):
        return {
            "A": list(self.A.factors),
            "C": list(self.C.factors),
            "action": [[list(r) for r in m.rows] for m in self.action],
            "cocycle": [[list(c1), list(c2), list(v)]
                        for (c1, c2), v in sorted(self.cocycle.items())],
        }

    @staticmethod
    def from_json(data) -> "ExtensionDescriptor":
        cocycle = {(tuple(c1), tuple(c2)): tuple(v)
                   for c1, c2, v in data["cocycle"]}
        return ExtensionDescriptor(data["A"], data["C"],
                                   [Mat(m) for m in data["action"]], cocycle)


def _gens(group: FinAb):
    k = len(group.factors)
    return [tuple(int(i == j) for i in range(k)) for j in range(k)]


class ConcreteGroup:
    """B realized on pairs (a, c) with the twisted multiplication."""

    def __init__(self, ext: ExtensionDescriptor):
        if ext.order() > 4096:
            raise TooLarge("concrete group bounded at 4096 elements")
        self.ext = ext
        self.elements = [(a, c) for c in ext.C.elements()
                         for a in ext.A.elements()]
        self.identity = (ext.A.zero, ext.C.zero)
        self._classes = None

    def mul(self, x, y):
        a1, c1 = x
        a2, c2 = y
        a = self.ext.A.add(self.ext.A.add(a1, self.ext.act(c1, a2)),
                           self.ext.z(c1, c2))
        return (a, self.ext.C.add(c1, c2))

    def inv(self, x):
        a, c = x
        ci = self.ext.C.neg(c)
        # (a', ci) with (a,c)(a',ci) = identity
        ap = self.ext.act(ci, self.ext.A.add(a, self.ext.z(c, ci)))
        return (self.ext.A.neg(ap), ci)

    def order_of(self, x) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def exponent(self) -> int:
        out = 1
        for x in self.elements:
            o = self.order_of(x)
            out = out * o // _gcd(out, o)
        return out

    def is_abelian(self) -> bool:
        els = self.elements
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in els for b in els)

    def conjugacy_classes(self):
        if self._classes is None:
            left = set(self.elements)
            classes = []
            while left:
                x = min(left)
                orbit = {self.mul(self.mul(g, x), self.inv(g))
                         for g in self.elements}
                classes.append(tuple(sorted(orbit)))
                left -= orbit
            self._classes = sorted(classes)
        return self._classes

    def section(self, c):
        return (self.ext.A.zero, c)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def commutator_function(ext: ExtensionDescriptor, c1, c2):
    """Image of s(c1)s(c2)s(c1)^{-1}s(c2)^{-1} in the <c1,c2>-coinvariants.

    Returns (coinvariant quotient, class).  Section independence is asserted
    by recomputing with a shifted section.
    """
    grp = ConcreteGroup(ext)
    word = _section_commutator(grp, c1, c2, shift=None)
    acts = [_power_action(ext, c1), _power_action(ext, c2)]
    quot = coinvariants(ext.A, acts)
    cls = quot.project(word)
    shift = tuple((i + 1) % d for i, d in enumerate(ext.A.factors))
    word2 = _section_commutator(grp, c1, c2, shift=shift)
    if quot.project(word2) != cls:
        raise ArithmeticError("commutator class depends on the section")
    return quot, cls


def _power_action(ext: ExtensionDescriptor, c):
    m = Mat.identity(len(ext.A.factors))
    for g, e in zip(ext.action, c):
        for _ in range(e):
            m = g * m
    return m


def _section_commutator(grp: ConcreteGroup, c1, c2, shift=None):
    s1 = (shift if shift is not None else grp.ext.A.zero, c1)
    s2 = (grp.ext.A.zero, c2)
    w = grp.mul(grp.mul(s1, s2), grp.mul(grp.inv(s1), grp.inv(s2)))
    assert w[1] == grp.ext.C.zero
    return w[0]


def has_multiplicity_one(ext: ExtensionDescriptor):
    """(bool, witness): the multiplicity-one criterion via the commutator.

    On failure the witness is (c1, c2, rho) where rho is a character of A
    that is <c1,c2>-invariant and nontrivial on the commutator.
    """
    cs = list(ext.C.elements())
    for c1 in cs:
        for c2 in cs:
            quot, cls = commutator_function(ext, c1, c2)
            if cls != quot.group.zero:
                rho = _separating_character(ext, quot, cls)
                return False, (c1, c2, rho)
    return True, None


def _separating_character(ext, quot, cls):
    """A character of A, invariant under the pair, nontrivial on the class."""
    q = quot.group
    for x in q.elements():
        if q.char_value(x, cls) != 0:
            # pull back along the projection: character of A
            def rho(a, _x=x):
                return q.char_value(_x, quot.project(a))

            return rho
    raise ArithmeticError("no separating character found")


class Pullback:
    def __init__(self, matrix: Mat, c_factors):
        self.matrix = matrix
        self.c_factors = tuple(c_factors)


class Pushout:
    def __init__(self, matrix: Mat, a_factors):
        self.matrix = matrix
        self.a_factors = tuple(a_factors)


def transform(ext: ExtensionDescriptor, op):
    """Pullback along C' -> C, pushout along A -> A', or Cartesian product."""
    if isinstance(op, Pullback):
        cp = FinAb.abstract(op.c_factors)
        m = op.matrix

        def img(c):
            out = m.apply(c)
            return tuple(int(x) % d for x, d in zip(out, ext.C.factors))

        for j, g in enumerate(_gens(cp)):
            if ext.C.smul(cp.factors[j], img(g)) != ext.C.zero:
                raise ValueError("pullback map is not a homomorphism")
        action = [_power_action(ext, img(g)) for g in _gens(cp)]
        cocycle = {(c1, c2): ext.z(img(c1), img(c2))
                   for c1 in cp.elements() for c2 in cp.elements()}
        return ExtensionDescriptor(ext.A.factors, op.c_factors, action, cocycle)
    if isinstance(op, Pushout):
        ap = FinAb.abstract(op.a_factors)
        m = op.matrix

        def phi(a):
            out = m.apply(a)
            return tuple(int(x) % d for x, d in zip(out, ap.factors))

        # the pushout action matrices A' -> A' must commute with phi
        new_action = []
        for g in ext.action:
            rows = _induced_matrix(ext.A, ap, m, g)
            if rows is None:
                raise NotEquivariant("pushout map is not C-equivariant")
            new_action.append(rows)
        cocycle = {(c1, c2): phi(ext.z(c1, c2))
                   for c1 in ext.C.elements() for c2 in ext.C.elements()}
        return ExtensionDescriptor(op.a_factors, ext.C.factors, new_action,
                                   cocycle)
    if isinstance(op, ExtensionDescriptor):
        other = op
        a_factors = list(ext.A.factors) + list(other.A.factors)
        c_factors = list(ext.C.factors) + list(other.C.factors)
        ka, kb = len(ext.A.factors), len(other.A.factors)
        action = []
        for g in ext.action:
            action.append(_block_diag(g, Mat.identity(kb)))
        for g in other.action:
            action.append(_block_diag(Mat.identity(ka), g))
        cocycle = {}
        for c1a in ext.C.elements():
            for c1b in other.C.elements():
                for c2a in ext.C.elements():
                    for c2b in other.C.elements():
                        cocycle[(tuple(c1a) + tuple(c1b),
                                 tuple(c2a) + tuple(c2b))] = (
                            tuple(ext.z(c1a, c2a)) + tuple(other.z(c1b, c2b)))
        return ExtensionDescriptor(a_factors, c_factors, action, cocycle)
    raise ValueError("unknown transform")


def _induced_matrix(a_group: FinAb, ap_group: FinAb, proj: Mat, g: Mat):
    """Matrix on A' with proj∘g = (matrix)∘proj, or None if not induced."""
    # solve column by column on the images of A-generators; A' is generated
    # by them when proj is surjective, which the corpus uses
    k = len(ap_group.factors)
    if k == 0:
        return Mat.identity(0)
    cols = {}
    for a in _gens(a_group):
        src = tuple(int(x) % d for x, d in zip(proj.apply(a), ap_group.factors))
        dst = tuple(int(x) % d for x, d in
                    zip(proj.apply(a_group.apply_matrix(g, a)), ap_group.factors))
        cols[src] = dst
    # extend linearly: find preimages of the standard generators
    out_cols = []
    table = _span_table(ap_group, list(cols))
    for j in range(k):
        e = tuple(int(i == j) for i in range(k))
        combo = table.get(e)
        if combo is None:
            return None
        acc = ap_group.zero
        for src, mult in combo:
            img = cols[src]
            acc = ap_group.add(acc, ap_group.smul(mult, img))
        out_cols.append(acc)
    rows = [[out_cols[j][i] for j in range(k)] for i in range(k)]
    m = Mat(rows)
    # verify equivariance on every generator
    for a in _gens(a_group):
        src = tuple(int(x) % d for x, d in zip(proj.apply(a), ap_group.factors))
        dst = tuple(int(x) % d for x, d in
                    zip(proj.apply(a_group.apply_matrix(g, a)), ap_group.factors))
        if ap_group.apply_matrix(m, src) != dst:
            return None
    return m


def _span_table(group: FinAb, gens):
    """Every group element as a combination of the given generators."""
    table = {group.zero: []}
    frontier = [group.zero]
    while frontier:
        nxt = []
        for x in frontier:
            combo = table[x]
            for s in gens:
                y = group.add(x, s)
                if y not in table:
                    table[y] = _combine(combo, s)
                    nxt.append(y)
        frontier = nxt
    return table


def _combine(combo, s):
    out = dict(combo)
    out[s] = out.get(s, 0) + 1
    return sorted(out.items())


def _block_diag(a: Mat, b: Mat) -> Mat:
    n, m = a.nrows, b.nrows
    rows = []
    for i in range(n):
        rows.append(list(a.rows[i]) + [0] * m)
    for i in range(m):
        rows.append([0] * n + list(b.rows[i]))
    return Mat(rows)


class CensusEntry:
    __slots__ = ("dimension", "orbit_size", "multiplicity", "count", "orbit_rep")

    def __init__(self, dimension, orbit_size, multiplicity, count, orbit_rep):
        self.dimension = dimension
        self.orbit_size = orbit_size
        self.multiplicity = multiplicity
        self.count = count
        self.orbit_rep = orbit_rep

    def to_json(self):
        return {"dimension": self.dimension, "orbit_size": self.orbit_size,
                "multiplicity": self.multiplicity, "count": self.count,
                "orbit_rep": list(self.orbit_rep)}


def irrep_census(ext: ExtensionDescriptor):
    """Census of Irr(B) via Clifford theory over the characters of A.

    For each C-orbit of characters rho of A: the stabilizer C_rho, the
    pushed-out cocycle rho∘z on C_rho (trivial iff symmetric, since the
    coefficients are divisible), the projective dimension m = sqrt of the
    index of the radical of its commutator pairing, and the census entry
    (dim = orbit * m, count = |C_rho| / m^2).
    """
    if ext.order() > 4096:
        raise TooLarge("census bounded at 4096")
    a, c = ext.A, ext.C
    cs = list(c.elements())
    seen = set()
    entries = []
    for rho in a.characters():
        if rho in seen:
            continue
        orbit = set()
        for cc in cs:
            img = _char_act(ext, cc, rho)
            orbit.add(img)
        seen |= orbit
        stab = [cc for cc in cs
                if _char_act(ext, cc, rho) == rho]
        # pushed cocycle on the stabilizer: values rho(z(c1,c2)) in Q/Z
        pairs = {}
        for c1 in stab:
            for c2 in stab:
                pairs[(c1, c2)] = a.char_value(rho, ext.z(c1, c2))
        # radical of the commutator pairing
        radical = [c1 for c1 in stab
                   if all((pairs[(c1, c2)] - pairs[(c2, c1)]) % 1 == 0
                          for c2 in stab)]
        m2 = len(stab) // len(radical)
        m = _isqrt(m2)
        if m * m != m2:
            raise ArithmeticError("commutator pairing radical of odd index")
        count = len(stab) // (m * m)
        entries.append(CensusEntry(len(orbit) * m, len(orbit), m, count, rho))
    total = sum(e.dimension ** 2 * e.count for e in entries)
    if total != ext.order():
        raise ArithmeticError("census mass formula fails")
    return entries


def _char_act(ext: ExtensionDescriptor, c, rho):
    """(c·rho)(a) = rho(c^{-1} a): the action on the character indices."""
    m = _power_action(ext, ext.C.neg(c))
    # rho' with rho'(a) = rho(m a): index transforms by the transpose
    k = len(ext.A.factors)
    out = [0] * k
    for j in range(k):
        e = tuple(int(i == j) for i in range(k))
        val = ext.A.char_value(rho, ext.A.apply_matrix(m, e))
        out[j] = int(val * ext.A.factors[j]) % ext.A.factors[j]
    return tuple(out)


def _isqrt(n: int) -> int:
    import math
    return math.isqrt(n)


def census_summary(entries):
    out = {}
    for e in entries:
        out[e.dimension] = out.get(e.dimension, 0) + e.count
    return out


def q8_descriptor() -> ExtensionDescriptor:
    """The quaternion group: A = Z/2 central, C = (Z/2)^2."""
    ident = Mat.identity(1)

    def z(c1, c2):
        # x^2 = y^2 = [x, y] = the central element
        carry_x = (c1[0] + c2[0]) // 2
        carry_y = (c1[1] + c2[1]) // 2
        cross = c1[1] * c2[0]
        return ((carry_x + carry_y + cross) % 2,)

    return ExtensionDescriptor([2], [2, 2], [ident, ident], z)


def dihedral8_central_descriptor() -> ExtensionDescriptor:
    """D4 of order 8 as a central extension of (Z/2)^2 by Z/2."""
    ident = Mat.identity(1)

    def z(c1, c2):
        return ((c1[1] * c2[0]) % 2,)

    return ExtensionDescriptor([2], [2, 2], [ident, ident], z)


def dihedral8_cyclic_descriptor() -> ExtensionDescriptor:
    """D4 of order 8 as Z/4 acted on by inversion, split."""
    return ExtensionDescriptor([4], [2], [Mat([[-1]])], {})


def random_descriptor(rng: random.Random, max_order=256) -> ExtensionDescriptor:
    """A random valid extension from the provably-cocycle families."""
    while True:
        a_factors = _random_factors(rng, rng.randint(1, 2))
        c_factors = _random_factors(rng, rng.randint(1, 2))
        order = 1
        for d in a_factors + c_factors:
            order *= d
        if order <= max_order:
            break
    a = FinAb.abstract(a_factors)
    c = FinAb.abstract(c_factors)
    ka, kc = len(a.factors), len(c.factors)
    action = []
    for j in range(kc):
        for _ in range(20):
            cand = _random_action(rng, a, c.factors[j])
            if all(_commute_on(a, cand, g) for g in action):
                action.append(cand)
                break
        else:
            action.append(Mat.identity(ka))
    trivial_action = all(g == Mat.identity(ka) for g in action)

    cocycle = {(c1, c2): a.zero for c1 in c.elements() for c2 in c.elements()}

    def add_cocycle(fn):
        for key in cocycle:
            cocycle[key] = a.add(cocycle[key], fn(*key))

    # carry cocycles along each C coordinate, valued at C-invariant elements
    # (inflation along C ->> Z/e_j needs invariance under the whole action)
    inv_els = [x for x in a.elements()
               if all(a.apply_matrix(g, x) == x for g in action)]
    for j in range(kc):
        t = rng.choice(inv_els)
        e = c.factors[j]
        add_cocycle(lambda c1, c2, j=j, t=t, e=e:
                    a.smul((c1[j] + c2[j]) // e, t))
    # a bilinear form when the action is trivial; the (i, j) coefficient must
    # be killed by gcd(e_i, e_j) so the form is biadditive on C
    if trivial_action and rng.random() < 0.7:
        coeffs = {}
        for i in range(kc):
            for j in range(kc):
                g = _gcd(c.factors[i], c.factors[j])
                pool = [x for x in a.elements() if a.smul(g, x) == a.zero]
                coeffs[(i, j)] = rng.choice(pool)

        def bilinear(c1, c2):
            acc = a.zero
            for (i, j), t in coeffs.items():
                acc = a.add(acc, a.smul(c1[i] * c2[j], t))
            return acc

        add_cocycle(bilinear)
    # a random coboundary (always legal, changes nothing observable)
    eps = {cc: rng.choice(list(a.elements())) for cc in c.elements()}
    eps[c.zero] = a.zero

    def cob(c1, c2):
        m = _power_action_raw(action, a, c1)
        return a.add(a.add(a.apply_matrix(m, eps[c2]), eps[c1]),
                     a.neg(eps[c.add(c1, c2)]))

    add_cocycle(cob)
    return ExtensionDescriptor(a_factors, c_factors, action, cocycle)


def _commute_on(a_group: FinAb, g: Mat, h: Mat) -> bool:
    return all(a_group.apply_matrix(g, a_group.apply_matrix(h, x))
               == a_group.apply_matrix(h, a_group.apply_matrix(g, x))
               for x in _gens(a_group))


def _power_action_raw(action, a_group, c):
    m = Mat.identity(len(a_group.factors))
    for g, e in zip(action, c):
        for _ in range(e):
            m = g * m
    return m


def _random_factors(rng, k):
    # divisibility chains built from small prime powers
    base = rng.choice([2, 2, 2, 3, 4])
    out = [base]
    for _ in range(k - 1):
        out.append(out[-1] * rng.choice([1, 1, 2]))
    return out


def _random_action(rng, a: FinAb, order: int):
    ka = len(a.factors)
    ident = Mat.identity(ka)
    candidates = [ident]
    # inversion
    candidates.append(Mat([[-1 if i == j else 0 for j in range(ka)]
                           for i in range(ka)]))
    # coordinate swaps between equal factors
    for i in range(ka):
        for j in range(i + 1, ka):
            if a.factors[i] == a.factors[j]:
                rows = [[int(k == l) for l in range(ka)] for k in range(ka)]
                rows[i][i] = rows[j][j] = 0
                rows[i][j] = rows[j][i] = 1
                candidates.append(Mat(rows))
    # small shears
    for i in range(ka):
        for j in range(ka):
            if i != j and a.factors[j] % a.factors[i] == 0:
                rows = [[int(k == l) for l in range(ka)] for k in range(ka)]
                rows[i][j] = 1
                candidates.append(Mat(rows))
    rng.shuffle(candidates)
    for m in candidates:
        if not a.is_automorphism(m):
            continue
        p = Mat.identity(ka)
        for _ in range(order):
            p = m * p
        if all(a.apply_matrix(p, g) == g for g in _gens(a)):
            return m
    return ident
