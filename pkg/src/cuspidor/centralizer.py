"""Parameter centralizers in a dual-group model, and the D_{2n} calculus.

Elements of the normalizer N(T,G) (extended by pinned outer automorphisms)
are modeled as triples (torus torsion point, Weyl part, outer part); products
go through the Tits section cocycle, so commutators of lifts carry exactly
the lambda_{u,v}(-1) corrections of the classical Tits-lift calculus.  The
centralizer of a parameter datum is computed by enumerating the Weyl
candidates and solving the torus equations over Q/Z; the resulting extension
1 -> fixed torus -> S_phi -> Omega -> 1 is handed to the Clifford machinery.
"""

from __future__ import annotations

from fractions import Fraction

from .clifford import ExtensionDescriptor, has_multiplicity_one
from .errors import InvalidCycleType, TooLarge
from .exactcore import (
    FinAb,
    Mat,
    QV,
    RankReport,
    abelian_basis,
    coinvariants,
    simultaneous_fixed_points,
    solve_affine,
    solve_linear_qz,
    twisted_fixed_points,
)
from .rootdata import RootDatum, WeylElement, build_classical, lambda_pair, tits_cocycle


class NormalizerElement:
    """(torus part, Weyl part, outer part) in the Tits model of N(T,G)."""

    __slots__ = ("rd", "tau", "weyl", "outer")

    def __init__(self, rd: RootDatum, tau: QV, weyl: Mat = None, outer: Mat = None):
        self.rd = rd
        self.tau = tau
        self.weyl = weyl if weyl is not None else Mat.identity(rd.rank)
        self.outer = outer if outer is not None else Mat.identity(rd.rank)

    def total(self) -> Mat:
        return self.weyl * self.outer

    def cochar(self) -> Mat:
        return self.rd.cochar_coord_matrix(self.total())

    def __eq__(self, other):
        return (self.tau, self.weyl, self.outer) == (other.tau, other.weyl,
                                                     other.outer)

    def is_identity(self) -> bool:
        ident = Mat.identity(self.rd.rank)
        return self.tau.is_zero() and self.weyl == ident and self.outer == ident

    def mul(self, other: "NormalizerElement") -> "NormalizerElement":
        rd = self.rd
        # n(w1)o1 n(w2)o2 = z(w1, o1 w2 o1^-1) n(w1 o1(w2)) o1 o2
        w2c = self.outer * other.weyl * self.outer.inverse().to_int()
        z = tits_cocycle(rd, self.weyl, w2c)
        tau = self.tau + other.tau.act(self.cochar()) + z
        return NormalizerElement(rd, tau, self.weyl * w2c, self.outer * other.outer)

    def inverse(self) -> "NormalizerElement":
        rd = self.rd
        oinv = self.outer.inverse().to_int()
        winv = oinv * self.weyl.inverse().to_int() * self.outer
        cand = NormalizerElement(rd, QV.zero(rd.rank), winv, oinv)
        resid = self.mul(cand)
        # self * cand = (resid.tau, 1, 1); shift cand by -(total^{-1}) resid.tau
        shift = (-resid.tau).act(_int_inverse(self.cochar()))
        out = NormalizerElement(rd, cand.tau + shift, winv, oinv)
        if not self.mul(out).is_identity():
            raise ArithmeticError("inverse construction failed")
        return out

    def conj(self, other: "NormalizerElement") -> "NormalizerElement":
        return self.mul(other).mul(self.inverse())

    def power(self, k: int) -> "NormalizerElement":
        out = NormalizerElement(self.rd, QV.zero(self.rd.rank))
        base = self
        if k < 0:
            base = self.inverse()
            k = -k
        for _ in range(k):
            out = out.mul(base)
        return out


def _int_inverse(m: Mat) -> Mat:
    inv = m.inverse()
    return inv.to_int() if inv.is_integral() else inv


class ParameterDatum:
    """Finite-order generators (torus, Weyl, outer) plus declared relations.

    Relations are tuples ("conj_power", i, j, q): g_i g_j g_i^{-1} = g_j^q,
    validated in the model on construction.
    """

    def __init__(self, rd: RootDatum, generators, relations=(), label=""):
        self.rd = rd
        self.generators = [NormalizerElement(rd, QV(t), w, o)
                           for (t, w, o) in generators]
        self.relations = tuple(relations)
        self.label = label
        self._validate()

    def _validate(self):
        for g in self.generators:
            if not self.rd.root_permutation_ok(g.total()):
                raise ValueError("generator does not permute the roots")
            g.cochar()  # must preserve the cocharacter lattice
        for rel in self.relations:
            kind = rel[0]
            if kind == "conj_power":
                _, i, j, q = rel
                lhs = self.generators[i].conj(self.generators[j])
                rhs = self.generators[j].power(q)
                if not lhs.mul(rhs.inverse()).is_identity():
                    raise ValueError(f"relation {rel} fails in the model")
            else:
                raise ValueError(f"unknown relation kind {kind!r}")

    def conjugate(self, weyl_mat: Mat) -> "ParameterDatum":
        """The datum conjugated by a (lifted) Weyl element."""
        x = NormalizerElement(self.rd, QV.zero(self.rd.rank), weyl_mat)
        gens = []
        for g in self.generators:
            h = x.conj(g)
            gens.append((h.tau.coords, h.weyl, h.outer))
        return ParameterDatum(self.rd, gens, self.relations,
                              label=self.label + "+conj")


class CentralizerReport:
    __slots__ = ("fixed_torus", "omega_matrices", "omega_factors", "extension",
                 "mult_one", "witness", "s_phi_order", "notes", "lifts")

    def __init__(self, fixed_torus, omega_matrices, omega_factors, extension,
                 mult_one, witness, s_phi_order, notes, lifts):
        self.fixed_torus = fixed_torus
        self.omega_matrices = omega_matrices
        self.omega_factors = omega_factors
        self.extension = extension
        self.mult_one = mult_one
        self.witness = witness
        self.s_phi_order = s_phi_order
        self.notes = notes
        self.lifts = lifts

    def to_json(self):
        ft = self.fixed_torus
        if isinstance(ft, RankReport):
            torus = {"free_rank": ft.free_rank,
                     "torsion": list(ft.torsion.factors)}
        else:
            torus = {"free_rank": 0, "torsion": list(ft.factors)}
        return {"fixed_torus": torus,
                "omega_order": len(self.omega_matrices),
                "omega_factors": list(self.omega_factors or ()),
                "s_phi_order": self.s_phi_order,
                "mult_one": self.mult_one,
                "notes": self.notes}


def centralizer(datum: ParameterDatum, weyl_bound: int = 10 ** 7) -> CentralizerReport:
    """Cent of the datum's image in the dual group, as an extension report.

    Enumerates Weyl candidates commuting with every generator's Weyl/outer
    part, solves the torus equations by SNF over Q/Z, and verifies each lift
    directly in the model before reading off the extension cocycle.
    """
    rd = datum.rd
    if rd.weyl_order() > weyl_bound:
        raise TooLarge("Weyl group too large to enumerate")
    notes = []
    gens = datum.generators
    fixed = simultaneous_fixed_points([g.cochar() for g in gens])
    if isinstance(fixed, RankReport):
        notes.append("fixed torus has positive rank; extension omitted")
        return CentralizerReport(fixed, [], None, None, None, None, None,
                                 notes, {})

    lifts = {}
    omega = []
    ident = Mat.identity(rd.rank)
    for m in rd.weyl_group():
        if not all(m * g.total() == g.total() * m for g in gens):
            continue
        tau = _solve_lift(rd, m, gens)
        if tau is None:
            continue
        x = NormalizerElement(rd, tau, m)
        for g in gens:
            if not x.conj(g).mul(g.inverse()).is_identity():
                raise ArithmeticError("solved lift fails to centralize")
        omega.append(m)
        lifts[m] = x

    abelian = all(a * b == b * a for a in omega for b in omega)
    if not abelian:
        notes.append("omega part is non-abelian; extension omitted")
        return CentralizerReport(fixed, omega, None, None, None, None,
                                 fixed.order * len(omega), notes, lifts)
    factors, basis, coords = abelian_basis(omega, lambda a, b: a * b, ident)
    ext = _extension_from_lifts(rd, fixed, factors, basis, lifts)
    mult_one, witness = (True, None)
    if ext is not None:
        mult_one, witness = has_multiplicity_one(ext)
    return CentralizerReport(fixed, omega, tuple(factors), ext, mult_one,
                             witness, fixed.order * len(omega), notes, lifts)


def _solve_lift(rd: RootDatum, m: Mat, gens):
    """tau with (tau, m) centralizing all generators, or None.

    For each generator g = (tau_g, v): (v - 1) tau = (m - 1) tau_g + C(m; v)
    where C collects the Tits cocycle corrections of x g x^{-1} g^{-1}.
    """
    n = rd.rank
    mc = rd.cochar_coord_matrix(m)
    minv = m.inverse().to_int()
    stacked = None
    rhs_parts = []
    for g in gens:
        vc = g.cochar()
        block = vc - Mat.identity(n)
        c_corr = _c_correction(rd, m, minv, g)
        rhs = QV(mc.apply(g.tau.coords)) - g.tau + c_corr
        stacked = block if stacked is None else stacked.stack(block)
        rhs_parts.append(rhs)
    rhs_all = QV([c for part in rhs_parts for c in part.coords])
    sol = solve_linear_qz(stacked, rhs_all)
    if sol is None:
        return None
    return sol.particular


def _c_correction(rd: RootDatum, m: Mat, minv: Mat, g: NormalizerElement) -> QV:
    """C(m; v) = z(m, v) - v.z(m, m^{-1}) + z(m v, m^{-1}) for x = (tau, m)."""
    # z-twists with x's outer part trivial
    z1 = tits_cocycle(rd, m, g.weyl)
    z2 = tits_cocycle(rd, m, minv)
    mv_weyl = m * g.weyl
    # z((mv_weyl, o_v), (m^{-1}, 1)) = z_LS(mv_weyl, o_v m^{-1} o_v^{-1})
    conj_minv = g.outer * minv * g.outer.inverse().to_int()
    z3 = tits_cocycle(rd, mv_weyl, conj_minv)
    return z1 - z2.act(g.cochar()) + z3


def _extension_from_lifts(rd, fixed: FinAb, factors, basis, lifts):
    if not lifts:
        return None
    k = len(fixed.factors)
    # action matrices of the chosen C-generators on the fixed torus
    action = []
    for bmat in basis:
        mc = rd.cochar_coord_matrix(bmat)
        cols = []
        for g in fixed.gens:
            cols.append(fixed.project(g.act(mc)))
        rows = [[cols[j][i] for j in range(k)] for i in range(k)]
        action.append(Mat(rows))
    if not factors:
        return ExtensionDescriptor(fixed.factors, [], [], {})

    c_group = FinAb.abstract(factors)

    def omega_of(c):
        m = Mat.identity(rd.rank)
        for b, e in zip(basis, c):
            for _ in range(e):
                m = b * m
        return m

    cocycle = {}
    for c1 in c_group.elements():
        x1 = lifts[omega_of(c1)]
        for c2 in c_group.elements():
            x2 = lifts[omega_of(c2)]
            x12 = lifts[omega_of(c_group.add(c1, c2))]
            word = x1.mul(x2).mul(x12.inverse())
            if word.weyl != Mat.identity(rd.rank):
                raise ArithmeticError("cocycle word has a Weyl part")
            cocycle[(c1, c2)] = fixed.project(word.tau)
    return ExtensionDescriptor(fixed.factors, factors, action, cocycle)


def mult_one_check_suite(datum: ParameterDatum, tag: str = "") -> dict:
    """Run the centralizer and compare against the tagged expectation.

    Data tagged simply-connected or unramified must come out with
    multiplicity one; untagged or ramified data may fail.
    """
    rep = centralizer(datum)
    must_hold = tag in ("simply-connected", "unramified")
    consistent = (rep.mult_one is True) if must_hold else True
    return {"label": datum.label, "tag": tag, "mult_one": rep.mult_one,
            "consistent": consistent, "s_phi_order": rep.s_phi_order,
            "omega_factors": list(rep.omega_factors or ()),
            "report": rep}


# ---------------------------------------------------------------------------
# D_{2n} commutator verification
# ---------------------------------------------------------------------------


class D2nReport:
    __slots__ = ("n", "q", "cycle_lengths", "lambda_w1_w0_empty",
                 "lambda_w2_w0_size", "lam", "b", "mu", "mu_denominators",
                 "lift_w1_fixed", "lift_w2_found", "half_lambda_w1_w2_integral",
                 "commutator_class_trivial", "fixed_group_factors",
                 "commutator_coords", "solve_affine_used")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw[k])

    def to_json(self):
        return {k: _jsonable(getattr(self, k)) for k in self.__slots__}

    @property
    def ok(self):
        return (self.lambda_w1_w0_empty and self.lift_w1_fixed
                and self.lift_w2_found and self.commutator_class_trivial)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def d2n_w_elements(n: int, cycle_lengths):
    """(rd, w0, w1, w2) in D_{2n}: the consecutive-negative-cycle normal form."""
    if n < 2:
        raise InvalidCycleType("need n >= 2")
    lens = list(cycle_lengths)
    if not lens or lens[0] != 1 or any(l < 1 for l in lens) or sum(lens) != n:
        raise InvalidCycleType("cycle lengths must be (1, l2, ...) summing to n")
    rank = 2 * n
    rd = build_classical("D", rank, "sc")
    # w0' on the first n coordinates: consecutive increasing negative cycles
    perm = list(range(rank))
    signs = [1] * rank
    start = 0
    for l in lens:
        block = list(range(start, start + l))
        for j in block[:-1]:
            perm[j] = j + 1
        perm[block[-1]] = block[0]
        signs[block[-1]] = -1
        start += l
    # mirror through m(e_i) = e_{2n-1-i}
    for j in range(n):
        src = rank - 1 - j
        img = perm[j]
        perm[src] = rank - 1 - img
        signs[src] = signs[j]
    from .rootdata import signed_perm_element
    w0 = signed_perm_element(rd, perm, signs)
    w1 = signed_perm_element(rd, list(range(rank)),
                             [-1] + [1] * (rank - 2) + [-1])
    mrev = signed_perm_element(rd, list(reversed(range(rank))), [1] * rank)
    w2 = WeylElement(rd, -Mat.identity(rank) * mrev.matrix)
    return rd, w0, w1, w2


def d2n_verify(n: int, q: int, cycle_lengths) -> D2nReport:
    """The constructive commutator computation for split D_{2n}.

    Builds w0 (elliptic, from the cycle type), w1, w2; checks that the Tits
    lift of w1 is Frobenius-fixed, corrects the lift of w2 by the torus
    element mu = (q w0 - 1)^{-1} (lambda_{w2,w0} / 2), and projects the
    commutator of the two fixed lifts to the coinvariants of the fixed torus.
    q = 1 is the complex (Ad-only) case.
    """
    if q != 1 and (q % 2 == 0 or not _is_prime_power(q)):
        raise InvalidCycleType("q must be 1 or an odd prime power")
    rd, w0, w1, w2 = d2n_w_elements(n, cycle_lengths)
    rank = 2 * n
    for u, v in ((w0, w1), (w0, w2), (w1, w2)):
        if not u.commutes_with(v):
            raise ArithmeticError("w0, w1, w2 must commute")
    f_ambient = q * rd.dual_matrix(w0.matrix)
    f_coords = q * rd.cochar_coord_matrix(w0.matrix)

    pair10 = lambda_pair(rd, w1, w0)
    pair20 = lambda_pair(rd, w2, w0)
    pair12 = lambda_pair(rd, w1, w2)

    # mu = (q w0 - 1)^{-1} (lambda/2), ambient coordinates
    half = [Fraction(x, 2) for x in pair20.lam]
    mu = (f_ambient - Mat.identity(rank)).inverse().apply(half)
    mu_dens = [Fraction(x).denominator for x in mu]
    lens = list(cycle_lengths)
    for i, den in enumerate(mu_dens):
        cyc = _cycle_of(i, lens, n)
        if (2 * (q ** cyc + 1)) % den:
            raise ArithmeticError("mu denominator outside q^l + 1 shape")
    mu_coords = QV(rd.coroot_coords(mu))
    if q != 1:
        p = _prime_of(q)
        if mu_coords.order() % p == 0:
            raise ArithmeticError("mu class order is divisible by p")

    # f-fixedness: the w2 lift corrected by mu satisfies (F-1)mu = lambda/2
    target = QV(rd.coroot_coords(half))
    img = QV((f_coords - Mat.identity(rank)).apply(mu_coords.coords))
    lift_w2_found = (img == target)
    sol = solve_affine(f_coords, target)
    solve_affine_used = sol is not None
    if sol is not None:
        resid = mu_coords - sol.particular
        if not isinstance(sol.kernel, RankReport):
            solve_affine_used = sol.kernel.contains(resid)

    b = _b_value(n, lens)
    lam_ok = (pair20.lam[0] == b and pair20.lam[rank - 1] == b)
    if not lam_ok:
        raise ArithmeticError("edge coordinates of lambda disagree with b")
    if b % 2:
        raise ArithmeticError("b must be even")

    # commutator of the fixed lifts: (w1 - 1) mu + lambda_{w1,w2}/2
    w1c = rd.cochar_coord_matrix(w1.matrix)
    comm = (QV(w1c.apply(mu_coords.coords)) - mu_coords
            + pair12.half_class_coords)
    fixed_check = QV((f_coords - Mat.identity(rank)).apply(comm.coords))
    if not fixed_check.is_zero():
        raise ArithmeticError("commutator is not Frobenius-fixed")

    fixed = twisted_fixed_points(f_coords)
    acts = []
    for w in (w1, w2):
        mc = rd.cochar_coord_matrix(w.matrix)
        k = len(fixed.factors)
        cols = [fixed.project(g.act(mc)) for g in fixed.gens]
        acts.append(Mat([[cols[j][i] for j in range(k)] for i in range(k)]))
    quot = coinvariants(fixed, acts)
    cls = quot.project(fixed.project(comm))
    trivial = (cls == quot.group.zero)

    return D2nReport(
        n=n, q=q, cycle_lengths=tuple(lens),
        lambda_w1_w0_empty=(len(pair10.roots) == 0),
        lambda_w2_w0_size=len(pair20.roots),
        lam=tuple(int(x) for x in pair20.lam),
        b=b,
        mu=tuple(str(x) for x in mu),
        mu_denominators=mu_dens,
        lift_w1_fixed=pair10.half_class_coords.is_zero(),
        lift_w2_found=bool(lift_w2_found and solve_affine_used),
        half_lambda_w1_w2_integral=pair12.trivial,
        commutator_class_trivial=trivial,
        fixed_group_factors=tuple(fixed.factors),
        commutator_coords=tuple(str(c) for c in comm.coords),
        solve_affine_used=solve_affine_used,
    )


def _cycle_of(i: int, lens, n: int) -> int:
    j = i if i < n else 2 * n - 1 - i
    start = 0
    for l in lens:
        if start <= j < start + l:
            return l
        start += l
    raise IndexError


def _b_value(n: int, lens) -> int:
    return 2 * n - 2 * len(lens)


def _is_prime_power(q: int) -> bool:
    p = _prime_of(q)
    while q % p == 0:
        q //= p
    return q == 1


def _prime_of(q: int) -> int:
    p = 2
    while p * p <= q:
        if q % p == 0:
            return p
        p += 1
    return q


def admissible_cycle_types(n: int):
    """All compositions (1, l2, ..., lk) of n."""
    def rec(rest):
        if rest == 0:
            yield ()
            return
        for first in range(1, rest + 1):
            for tail in rec(rest - first):
                yield (first,) + tail

    return [(1,) + tail for tail in rec(n - 1)]
