"""Tori over finite fields as Frobenius-twisted cocharacter lattices.

A torus is a triple (root datum, Weyl twist w, odd prime power q); Frobenius
acts on X^vee ⊗ Q/Z as F = q·w and the rational points over the degree-d
extension are ker(F^d - 1), presented as the finite abelian group
X^vee/(F^d - 1)X^vee with an explicit section.  All computations stay in
lattice-basis coordinates.

Coordinate conventions: a lattice is a matrix S whose rows are basis vectors
of a subspace of the cocharacter space V*; the coordinates of an ambient
vector y are (S^T)^{-1} y, and a V*-endomorphism M acts on coordinates by
(S^T)^{-1} M S^T.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyc
from .errors import (
    IncompatibleCharacters,
    NotRealizable,
    NotStabilizing,
    SingularCharacter,
)
from .exactcore import (
    Mat,
    QV,
    abelian_basis,
    quotient_by,
    twisted_fixed_points,
)
from .ffield import FiniteField
from .rootdata import RootDatum, WeylElement


def _prime_power(q: int):
    p = 2
    n = q
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    m = 0
    while n > 1:
        if n % p:
            raise ValueError("q must be a prime power")
        n //= p
        m += 1
    return p, m


def _solver(basis_rows: Mat) -> Mat:
    """Left inverse of basis_rows^T (Gram pseudo-inverse for k < n)."""
    if basis_rows.nrows == basis_rows.ncols:
        return basis_rows.transpose().inverse()
    return (basis_rows * basis_rows.transpose()).inverse() * basis_rows


def coords_of(basis_rows: Mat, ambient):
    """Coordinates of an ambient vector on the given lattice basis."""
    coords = _solver(basis_rows).apply(ambient)
    back = basis_rows.transpose().apply(coords)
    if [Fraction(x) for x in back] != [Fraction(x) for x in ambient]:
        raise ValueError("vector outside the span of the lattice")
    return coords


def ambient_of(basis_rows: Mat, coords):
    return basis_rows.transpose().apply(coords)


def coord_matrix(basis_rows: Mat, vstar_mat: Mat) -> Mat:
    """A V*-endomorphism in the coordinates of the given lattice basis."""
    out = _solver(basis_rows) * vstar_mat * basis_rows.transpose()
    # the span must be preserved, not just hit compatibly
    back = basis_rows.transpose() * out
    if back != vstar_mat * basis_rows.transpose():
        raise ValueError("endomorphism does not preserve the span")
    if not out.is_integral():
        raise ValueError("endomorphism does not preserve the lattice")
    return out.to_int()


def coord_convert(from_rows: Mat, to_rows: Mat) -> Mat:
    """Coordinate conversion matrix between two lattice bases."""
    out = _solver(to_rows) * from_rows.transpose()
    back = to_rows.transpose() * out
    if back != from_rows.transpose():
        raise ValueError("source lattice outside the span of the target")
    return out


class FrobeniusTorus:
    """(cocharacter lattice of rd, twist w, q) with Frobenius q·w."""

    def __init__(self, rd: RootDatum, w: WeylElement, q: int):
        p, _ = _prime_power(q)
        if p == 2:
            raise ValueError("q must be odd")
        self.rd = rd
        self.w = w
        self.q = q
        self.p = p
        self.w_cochar = rd.cochar_coord_matrix(w.matrix)
        self.splitting_degree = self._twist_order()

    def _twist_order(self) -> int:
        k, m = 1, self.w_cochar
        ident = Mat.identity(self.rd.rank)
        while m != ident:
            m = m * self.w_cochar
            k += 1
        return k

    def frobenius(self, d: int = 1) -> Mat:
        return (self.q ** d) * (self.w_cochar ** d)

    def rational_points(self, d: int = 1):
        """S(k_d) = ker(F^d - 1) with section into (Q/Z)^rank."""
        return twisted_fixed_points(self.frobenius(d))

    def norm_matrix(self, d: int) -> Mat:
        """Sum of F^i for i < d, inducing the norm S(k_d) -> S(k)."""
        acc = Mat.identity(self.rd.rank)
        out = Mat.identity(self.rd.rank)
        for _ in range(d - 1):
            acc = acc * self.frobenius()
            out = out + acc
        return out

    def norm_map(self, d: int):
        """The norm as a map on coordinate tuples of S(k_d) into S(k)."""
        src = self.rational_points(d)
        dst = self.rational_points(1)
        nm = self.norm_matrix(d)

        def fn(coords):
            v = src.lift(coords)
            img = QV(nm.apply(v.coords))
            return dst.project(img)

        return src, dst, fn

    def point_in(self, vec: QV, d: int = 1) -> bool:
        img = (self.frobenius(d) - Mat.identity(self.rd.rank)).apply(vec.coords)
        return all(Fraction(x) % 1 == 0 for x in img)

    def coroot_point(self, coroot, x: Fraction) -> QV:
        """alpha_vee ⊗ x as a point of the torus over the closure."""
        coords = self.rd.coroot_coords(coroot)
        return QV([Fraction(c) * x for c in coords])

    def weyl_centralizer(self):
        """Elements of W commuting with the twist (the rational Weyl group)."""
        out = []
        for m in self.rd.weyl_group():
            mc = self.rd.cochar_coord_matrix(m)
            if mc * self.w_cochar == self.w_cochar * mc:
                out.append(m)
        return out

    def realize_in_field(self, vec: QV, field: FiniteField = None):
        """Coordinates of a torus point as elements of GF(q^m)^rank."""
        m = self.splitting_degree
        card = self.q ** m - 1
        if field is None:
            p, e = _prime_power(self.q)
            field = FiniteField(p, e * m)
        if field.q != self.q ** m:
            raise NotRealizable("field size does not match the splitting degree")
        out = []
        for c in vec.coords:
            c = Fraction(c) % 1
            if card % c.denominator:
                raise NotRealizable(
                    f"denominator {c.denominator} does not divide q^m - 1 = {card}")
            out.append(field.gen_power(c.numerator * (card // c.denominator)))
        return tuple(out)

    def to_json(self):
        return {"root_datum": self.rd.to_json(),
                "weyl": [list(r) for r in self.w.matrix.rows],
                "q": self.q}

    @staticmethod
    def from_json(data) -> "FrobeniusTorus":
        rd = RootDatum.from_json(data["root_datum"])
        w = WeylElement(rd, Mat(data["weyl"]))
        return FrobeniusTorus(rd, w, data["q"])


class TorusCharacter:
    """A homomorphism S(k) -> Q/Z given on normal-form coordinates."""

    def __init__(self, torus: FrobeniusTorus, values):
        self.torus = torus
        self.group = torus.rational_points(1)
        self.values = tuple(Fraction(v) % 1 for v in values)
        if len(self.values) != len(self.group.factors):
            raise ValueError("one value per invariant factor required")
        for v, d in zip(self.values, self.group.factors):
            if (v * d) % 1 != 0:
                raise ValueError("character value order incompatible with factor")

    def __call__(self, coords) -> Fraction:
        return sum((Fraction(a) * v for a, v in zip(coords, self.values)),
                   Fraction(0)) % 1

    def on_vector(self, vec: QV) -> Fraction:
        return self(self.group.project(vec))

    def order(self) -> int:
        out = 1
        for v in self.values:
            o = (v % 1).denominator
            out = out * o // _gcd(out, o)
        return out

    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.values)

    def composite_with_coroot(self, coroot, degree: int = None) -> Fraction:
        """theta∘N∘alpha_vee at the generator of k_d^x, as a Q/Z value.

        The composite character of the cyclic group k_d^x is nontrivial iff
        this value is nonzero; d defaults to the full splitting degree.
        """
        t = self.torus
        d = degree if degree is not None else t.splitting_degree
        card = t.q ** d - 1
        pt = t.coroot_point(coroot, Fraction(1, card))
        nm = t.norm_matrix(d)
        img = QV(nm.apply(pt.coords))
        return self.on_vector(img)

    def twist_by(self, weyl_mat: Mat) -> "TorusCharacter":
        """theta ∘ w for w commuting with the twist."""
        mc = self.torus.rd.cochar_coord_matrix(weyl_mat)
        vals = [self.on_vector(g.act(mc)) for g in self.group.gens]
        return TorusCharacter(self.torus, vals)

    def to_json(self):
        return {"values": [str(v) for v in self.values]}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def all_characters(torus: FrobeniusTorus):
    """Every character of S(k), enumerated through the dual group."""
    group = torus.rational_points(1)
    for x in group.elements():
        yield TorusCharacter(torus, [Fraction(xi, d) for xi, d in
                                     zip(x, group.factors)])


def is_nonsingular(theta: TorusCharacter, subsystem=None) -> bool:
    """theta∘N∘alpha_vee nontrivial for every root alpha of the subsystem."""
    rd = theta.torus.rd
    roots = subsystem if subsystem is not None else rd.roots
    for a in roots:
        if theta.composite_with_coroot(rd.coroot(tuple(a))) == 0:
            return False
    return True


class StabilizerReport:
    __slots__ = ("matrices", "order", "abelian", "cyclic", "nonsingular",
                 "split_d2n", "invariant_factors")

    def __init__(self, matrices, order, abelian, cyclic, nonsingular, split_d2n,
                 invariant_factors):
        self.matrices = matrices
        self.order = order
        self.abelian = abelian
        self.cyclic = cyclic
        self.nonsingular = nonsingular
        self.split_d2n = split_d2n
        self.invariant_factors = invariant_factors

    def to_json(self):
        return {"order": self.order, "abelian": self.abelian,
                "cyclic": self.cyclic, "nonsingular": self.nonsingular,
                "split_d2n": self.split_d2n,
                "invariant_factors": list(self.invariant_factors or ())}


def weyl_stabilizer(theta: TorusCharacter) -> StabilizerReport:
    """Omega(S,G)(k)_theta: w-commuting Weyl elements fixing theta on S(k)."""
    t = theta.torus
    group = theta.group
    n = t.rd.rank
    stab = []
    for m in t.weyl_centralizer():
        mc = t.rd.cochar_coord_matrix(m)
        if all(theta.on_vector(g.act(mc)) == theta(_unit(i, group))
               for i, g in enumerate(group.gens)):
            stab.append(m)
    order = len(stab)
    abelian = all(a * b == b * a for a in stab for b in stab)
    cyclic = any(_mat_order(m, n) == order for m in stab)
    kind = t.rd.label
    split_d2n = kind.startswith("D") and int(kind[1:]) % 2 == 0
    inv = None
    if abelian:
        factors, _, _ = abelian_basis(stab, lambda a, b: a * b, Mat.identity(n))
        inv = tuple(sorted(factors))
    return StabilizerReport(stab, order, abelian, cyclic,
                            is_nonsingular(theta), split_d2n, inv)


def is_regular(theta: TorusCharacter) -> bool:
    return weyl_stabilizer(theta).order == 1


def _unit(i, group):
    return tuple(int(j == i) for j in range(len(group.factors)))


def _mat_order(m: Mat, n: int) -> int:
    k, x = 1, m
    ident = Mat.identity(n)
    while x != ident:
        x = x * m
        k += 1
    return k


class AdjointModel:
    """The adjoint and simply connected tori with the same twist.

    S_ad lives on the coweight lattice P^vee (fundamental coweights), S_sc on
    the coroot lattice Q^vee; the cokernel of S(k) -> S_ad(k) is computed from
    the inclusion X^vee <= P^vee.
    """

    def __init__(self, torus: FrobeniusTorus):
        rd = torus.rd
        self.torus = torus
        self.rd = rd
        self.pv_rows = Mat(rd.simple_roots).inverse().transpose()
        self.qv_rows = Mat([rd.coroot(a) for a in rd.simple_roots])
        wm = rd.dual_matrix(torus.w.matrix)
        self.f_ad = torus.q * coord_matrix(self.pv_rows, wm)
        self.points_ad = twisted_fixed_points(self.f_ad)
        # X^vee-basis rows: dual basis of rd.basis
        self.xv_rows = rd.basis.inverse().transpose()
        conv = coord_convert(self.xv_rows, self.pv_rows)
        if not conv.is_integral():
            raise ValueError("X^vee is not contained in P^vee")
        self.x_to_ad = conv.to_int()
        conv2 = coord_convert(self.qv_rows, self.xv_rows)
        if not conv2.is_integral():
            raise ValueError("Q^vee is not contained in X^vee")
        self.sc_to_x = conv2.to_int()

    def cokernel(self):
        """cok(S(k) -> S_ad(k)) as a quotient of S_ad(k)."""
        sk = self.torus.rational_points(1)
        images = [self.points_ad.project(QV(self.x_to_ad.apply(g.coords)))
                  for g in sk.gens]
        return quotient_by(self.points_ad, images)

    def sc_coord_matrix(self, weyl_mat: Mat) -> Mat:
        return coord_matrix(self.qv_rows, self.rd.dual_matrix(weyl_mat))


def bicharacter(theta: TorusCharacter, weyl_mat: Mat, s_ad_coords,
                _rep: StabilizerReport = None, _model: AdjointModel = None) -> Cyc:
    """theta(w s_sc w^{-1} s_sc^{-1}) for w stabilizing theta, s_ad in S_ad(k).

    The lift s_sc is the ambient rational vector of s_ad read modulo the
    coroot lattice; the commutator is (w-1)s_sc pushed into S(k) through
    Q^vee <= X^vee.  Independence of the lift is asserted by re-evaluating
    with a center-shifted second lift.  ``_rep``/``_model`` short-circuit
    recomputation inside sweeps.
    """
    rep = _rep if _rep is not None else weyl_stabilizer(theta)
    if weyl_mat not in rep.matrices:
        raise NotStabilizing("weyl element does not stabilize theta")
    model = _model if _model is not None else AdjointModel(theta.torus)
    s_ad = QV(s_ad_coords)
    if not model.points_ad.contains(s_ad):
        raise ValueError("s_ad is not a rational point of the adjoint torus")
    val = _bichar_value(theta, model, weyl_mat, s_ad, shift=False)
    shifted = _bichar_value(theta, model, weyl_mat, s_ad, shift=True)
    if val != shifted:
        raise ArithmeticError("bicharacter depends on the chosen lift")
    return Cyc.from_qz(val)


def _bichar_value(theta, model, weyl_mat, s_ad: QV, shift: bool) -> Fraction:
    amb = list(ambient_of(model.pv_rows, s_ad.coords))
    if shift:
        # another lift of the same s_ad: shift by an integral coweight,
        # which is a (generally nontrivial) central class modulo Q^vee
        amb = [a + w for a, w in zip(amb, model.pv_rows.rows[0])]
    sc = QV(coords_of(model.qv_rows, amb))
    wc = model.sc_coord_matrix(weyl_mat)
    delta = QV(wc.apply(sc.coords)) - sc
    x_coords = QV(model.sc_to_x.apply(delta.coords))
    return theta.on_vector(x_coords)


def packet_counts(theta: TorusCharacter):
    """(Deligne-Lusztig packet size, extension count), both |Omega_theta|."""
    if not is_nonsingular(theta):
        raise SingularCharacter("packet counts require a non-singular character")
    rep = weyl_stabilizer(theta)
    return rep.order, rep.order


class DisconnectedPairing:
    __slots__ = ("omega_cosets", "point_classes", "table", "left_kernel_trivial",
                 "omega_theta0", "omega_theta")

    def __init__(self, omega_cosets, point_classes, table, left_kernel_trivial,
                 omega_theta0, omega_theta):
        self.omega_cosets = omega_cosets
        self.point_classes = point_classes
        self.table = table
        self.left_kernel_trivial = left_kernel_trivial
        self.omega_theta0 = omega_theta0
        self.omega_theta = omega_theta


def disconnected_bicharacter(theta_full: TorusCharacter, sub_rows: Mat,
                             theta0_values) -> DisconnectedPairing:
    """Pairing (w, s) -> theta0(w s w^{-1} s^{-1}) on Omega_{theta0}/Omega_theta
    x S(k)/S^0(k).

    ``sub_rows`` spans the cocharacter lattice of the connected part S^0 inside
    the ambient cocharacter space; theta0 is given on the normal form of
    S^0(k) and must agree with the restriction of theta_full.
    """
    t = theta_full.torus
    rd = t.rd
    wm = rd.dual_matrix(t.w.matrix)
    f_sub = t.q * coord_matrix(sub_rows, wm)
    s0 = twisted_fixed_points(f_sub)
    theta0 = tuple(Fraction(v) % 1 for v in theta0_values)

    def theta0_of(coords0):
        return sum((Fraction(a) * v for a, v in zip(coords0, theta0)),
                   Fraction(0)) % 1

    xv_rows = rd.basis.inverse().transpose()
    incl = coord_convert(sub_rows, xv_rows)
    if not incl.is_integral():
        raise ValueError("sublattice not contained in X^vee")
    incl = incl.to_int()
    sk = theta_full.group

    for i, g in enumerate(s0.gens):
        if theta_full.on_vector(QV(incl.apply(g.coords))) != theta0_of(_unit(i, s0)):
            raise IncompatibleCharacters("theta_full does not restrict to theta0")

    stab_full = set(weyl_stabilizer(theta_full).matrices)
    stab0 = []
    for m in t.weyl_centralizer():
        md = rd.dual_matrix(m)
        try:
            mc0 = coord_matrix(sub_rows, md)
        except ValueError:
            continue
        if all(theta0_of(s0.project(g.act(mc0))) == theta0_of(_unit(i, s0))
               for i, g in enumerate(s0.gens)):
            stab0.append(m)
    stab_full = [m for m in stab0 if m in stab_full]

    coset_reps, seen = [], set()
    for m in stab0:
        if m in seen:
            continue
        coset_reps.append(m)
        for h in stab_full:
            seen.add(m * h)

    images = [sk.project(QV(incl.apply(g.coords))) for g in s0.gens]
    quot = quotient_by(sk, images)
    point_reps = {}
    for coords in sk.elements():
        cls = quot.project(coords)
        if cls not in point_reps:
            point_reps[cls] = coords

    table = {}
    for i, m in enumerate(coset_reps):
        md = rd.dual_matrix(m)
        for cls, coords in point_reps.items():
            amb = ambient_of(xv_rows, sk.lift(coords).coords)
            delta = [a - b for a, b in zip(md.apply(amb), amb)]
            c0 = QV(coords_of(sub_rows, delta))
            table[(i, cls)] = Cyc.from_qz(theta0_of(s0.project(c0)))
    left_kernel_trivial = all(
        any(not (table[(i, cls)] == 1) for cls in point_reps)
        for i, m in enumerate(coset_reps) if m not in stab_full)
    return DisconnectedPairing(coset_reps, sorted(point_reps), table,
                               left_kernel_trivial, stab0, list(stab_full))
