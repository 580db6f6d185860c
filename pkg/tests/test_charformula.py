from fractions import Fraction

import pytest

from cuspidor.charformula import (
    ASYMMETRIC,
    SYMMETRIC_UNRAMIFIED,
    classify_chi_data,
    delta_II,
    delta_II_at_representative,
    mod_a_data,
    theta_sum,
)
from cuspidor.cyclotomic import Cyc
from cuspidor.errors import SingularRoot
from cuspidor.exactcore import Mat, QV
from cuspidor.ffield import FiniteField
from cuspidor.rootdata import WeylElement, build_classical
from cuspidor.torus import FrobeniusTorus, TorusCharacter, all_characters, is_nonsingular


def sl2_coxeter(q=3):
    rd = build_classical("A", 1, "sc")
    return FrobeniusTorus(rd, WeylElement(rd, -Mat.identity(1)), q)


def theta_of_order(torus, order):
    g = torus.rational_points(1)
    d = g.factors[0]
    return TorusCharacter(torus, [Fraction(d // order, d)])


def test_classify_sl2():
    chi = classify_chi_data(sl2_coxeter(3))
    assert len(chi.orbits) == 1
    orb = chi.orbits[0]
    assert orb.kind == SYMMETRIC_UNRAMIFIED
    assert orb.degree == 2


def test_classify_split():
    rd = build_classical("A", 1, "sc")
    t = FrobeniusTorus(rd, WeylElement(rd, Mat.identity(1)), 3)
    chi = classify_chi_data(t)
    assert all(o.kind == ASYMMETRIC for o in chi.orbits)
    assert len(chi.orbits) == 2


def test_classify_d4_minus_one():
    rd = build_classical("D", 4, "sc")
    t = FrobeniusTorus(rd, WeylElement(rd, -Mat.identity(4)), 3)
    chi = classify_chi_data(t)
    assert len(chi.orbits) == 12
    assert all(o.kind == SYMMETRIC_UNRAMIFIED and o.degree == 2
               for o in chi.orbits)


def test_mod_a_sl2_order4_nonsquare():
    t = sl2_coxeter(3)
    th = theta_of_order(t, 4)
    a = mod_a_data(th)
    orb = classify_chi_data(t).orbits[0]
    assert a.sign(orb.rep) == -1  # the nonsquare class of GF(9)^x


def test_mod_a_singular_root():
    t = sl2_coxeter(3)
    with pytest.raises(SingularRoot):
        mod_a_data(TorusCharacter(t, [0]))


def test_mod_a_rescaling_invariance():
    # rescaling Lambda0 by a base-field unit u leaves the square class
    # unchanged: u is automatically a square in the even-degree orbit field,
    # so the class of u^{-1} a equals that of a.
    f9 = FiniteField(3, 2)
    for u in range(1, 3):
        emb = f9.from_int(u)
        assert f9.sgn(emb) == 1


def test_delta_sl2():
    t = sl2_coxeter(3)
    th = theta_of_order(t, 4)
    chi = classify_chi_data(t)
    a = mod_a_data(th)
    gamma = th.group.gens[0]
    f9 = FiniteField(3, 2)
    res = delta_II(th, gamma, chi, a, f9)
    assert res.value == Cyc.rational(1) or res.value == Cyc.rational(-1)
    # direct recomputation of the single orbit factor
    orb = chi.orbits[0]
    pairing = t.rd.pairing_row(orb.rep)
    val = sum(Fraction(r) * c for r, c in zip(pairing, gamma.coords)) % 1
    x = f9.gen_power(val.numerator * (8 // val.denominator))
    want = f9.sgn(f9.sub(x, f9.one)) * a.sign(orb.rep)
    assert res.value == Cyc.rational(want)


def test_delta_trivial_when_no_symmetric_orbits():
    rd = build_classical("A", 1, "sc")
    t = FrobeniusTorus(rd, WeylElement(rd, Mat.identity(1)), 3)
    th = TorusCharacter(t, [Fraction(1, 2)])
    chi = classify_chi_data(t)
    a = mod_a_data(th, chi)
    gamma = th.group.gens[0]
    f3 = FiniteField(3, 1)
    res = delta_II(th, gamma, chi, a, f3)
    assert res.value == Cyc.rational(1)


def test_delta_skips_degenerate():
    t = sl2_coxeter(3)
    th = theta_of_order(t, 4)
    chi = classify_chi_data(t)
    a = mod_a_data(th)
    f9 = FiniteField(3, 2)
    res = delta_II(th, QV([0]), chi, a, f9)
    assert res.skipped_orbits
    assert res.value == Cyc.rational(1)


def test_delta_square_class_well_defined():
    # replacing a by a square multiple leaves every factor fixed: the factor
    # uses only the stored sign, asserted by recomputing with both reps
    t = sl2_coxeter(3)
    th = theta_of_order(t, 4)
    chi = classify_chi_data(t)
    a = mod_a_data(th)
    f9 = FiniteField(3, 2)
    gamma = th.group.gens[0]
    base = delta_II(th, gamma, chi, a, f9).value
    # flipping the class flips the value: the class genuinely enters
    flipped = type(a)(a.torus, {k: -v for k, v in a.classes.items()})
    assert delta_II(th, gamma, chi, flipped, f9).value == base * Fraction(-1)


def test_delta_representative_independence():
    for q in (3, 5):
        t = sl2_coxeter(q)
        for th in all_characters(t):
            if not is_nonsingular(th):
                continue
            chi = classify_chi_data(t)
            a = mod_a_data(th, chi)
            field = FiniteField(q if q == 3 else 5, 2)
            for gamma_coords in th.group.elements():
                gamma = th.group.lift(gamma_coords)
                orb = chi.orbits[0]
                vals = set()
                for rep in orb.roots:
                    v = delta_II_at_representative(th, gamma, chi, a, orb, rep,
                                                   field)
                    vals.add(v)
                assert len(vals) == 1, (q, gamma_coords)


def test_theta_sum_single_term():
    t = sl2_coxeter(3)
    th = theta_of_order(t, 4)
    chi = classify_chi_data(t)
    a = mod_a_data(th)
    f9 = FiniteField(3, 2)
    gamma = th.group.gens[0]
    s = theta_sum(th, gamma, chi, a, [Mat.identity(1)], f9)
    d = delta_II(th, gamma, chi, a, f9)
    assert s == d.value * Cyc.from_qz(th.on_vector(gamma))


def test_theta_sum_sl2_quadratic():
    # theta quadratic: two terms with theta(gamma^w) = theta(gamma)
    t = sl2_coxeter(3)
    th = theta_of_order(t, 2)
    chi = classify_chi_data(t)
    a = mod_a_data(th)
    f9 = FiniteField(3, 2)
    gamma = th.group.gens[0]
    wset = [Mat.identity(1), -Mat.identity(1)]
    s = theta_sum(th, gamma, chi, a, wset, f9)
    tv = Cyc.from_qz(th.on_vector(gamma))
    d1 = delta_II(th, gamma, chi, a, f9).value
    d2 = delta_II(th, QV([(-1) * gamma.coords[0]]), chi, a, f9).value
    assert s == tv * (d1 + d2)


def test_theta_sum_reindex_invariance():
    for q in (3, 5):
        t = sl2_coxeter(q)
        field = FiniteField(q, 2) if q in (3, 5) else None
        wset = [Mat.identity(1), -Mat.identity(1)]
        for th in all_characters(t):
            if not is_nonsingular(th):
                continue
            chi = classify_chi_data(t)
            a = mod_a_data(th, chi)
            for gc in th.group.elements():
                gamma = th.group.lift(gc)
                base = theta_sum(th, gamma, chi, a, wset, field)
                for m in wset:
                    gw = QV(t.rd.cochar_coord_matrix(m).inverse().to_int()
                            .apply(gamma.coords))
                    assert theta_sum(th, gw, chi, a, wset, field) == base


def test_theta_sum_rejects_noncommuting():
    rd = build_classical("A", 2, "sc")
    # Coxeter twist of order 3; a reflection does not commute with it
    cox = None
    for m in rd.weyl_group():
        w = WeylElement(rd, m)
        if w.order == 3 and w.is_elliptic():
            cox = w
            break
    t = FrobeniusTorus(rd, cox, 3)
    refl = rd.reflection(rd.simple_roots[0])
    th = TorusCharacter(t, [Fraction(1, o) for o in t.rational_points(1).factors])
    chi = classify_chi_data(t)
    from cuspidor.errors import InvalidWeylSet
    a = mod_a_data(th, chi) if is_nonsingular(th) else None
    if a is None:
        pytest.skip("character not non-singular for this q")
    with pytest.raises(InvalidWeylSet):
        theta_sum(th, th.group.gens[0], chi, a, [refl])


def test_galois_stability_of_delta():
    # Frobenius-stable data: the value is fixed by the q-power galois map
    t = sl2_coxeter(3)
    th = theta_of_order(t, 2)
    chi = classify_chi_data(t)
    a = mod_a_data(th)
    f9 = FiniteField(3, 2)
    gamma = th.group.gens[0]
    v = delta_II(th, gamma, chi, a, f9).value
    assert v.galois(3) == v  # value is rational (+-1), trivially stable
