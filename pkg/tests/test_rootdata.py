from fractions import Fraction

import pytest

from cuspidor.errors import InvalidLattice, NotCommuting, Reducible
from cuspidor.exactcore import Mat, QV
from cuspidor.rootdata import (
    RootDatum,
    WeylElement,
    bad_prime_data,
    build_classical,
    connection_index,
    lambda_pair,
    prime_support,
    signed_perm_element,
    table_check,
    tits_cocycle,
    weyl_order_formula,
    weyl_order_primes,
)


def minus_one(rd):
    return WeylElement(rd, -Mat.identity(rd.rank))


def test_a1_basics():
    rd = build_classical("A", 1, "sc")
    assert len(rd.roots) == 2
    a = rd.simple_roots[0]
    av = rd.coroot(a)
    assert sum(x * y for x, y in zip(a, av)) == 2


def test_d4_counts_and_connection_index():
    rd = build_classical("D", 4, "sc")
    assert len(rd.roots) == 24
    assert len(rd.positive_roots()) == 12
    assert connection_index(rd) == 4


def test_b4_counts():
    rd = build_classical("B", 4, "ad")
    assert len(rd.roots) == 32
    assert len(rd.positive_roots()) == 16


def test_root_closure_matches_formula_counts():
    for kind, n, total in [("A", 2, 6), ("A", 3, 12), ("B", 2, 8), ("B", 3, 18),
                           ("C", 3, 18), ("D", 4, 24), ("D", 5, 40)]:
        rd = build_classical(kind, n, "sc")
        assert len(rd.roots) == total


def test_reflection_closure_invariant():
    for kind, n in [("A", 2), ("B", 3), ("C", 3), ("D", 4), ("A", 4), ("D", 5)]:
        rd = build_classical(kind, n, "sc")
        rootset = set(rd.roots)
        for a in rd.simple_roots:
            s = rd.reflection(a)
            for r in rd.roots:
                assert tuple(s.apply(r)) in rootset


def test_weyl_orders():
    rd = build_classical("D", 4, "sc")
    order, primes = weyl_order_primes(rd)
    assert order == 192
    assert primes == {2, 3}
    assert weyl_order_formula(rd) == 192
    rd = build_classical("A", 1, "sc")
    assert weyl_order_primes(rd) == (2, {2})
    for kind, n, expect in [("A", 3, 24), ("B", 3, 48), ("C", 2, 8), ("D", 5, 1920)]:
        rd = build_classical(kind, n, "sc")
        assert rd.weyl_order() == expect
        assert weyl_order_formula(rd) == expect


def test_bad_primes():
    assert bad_prime_data(build_classical("B", 4, "sc"))[0] == {2}
    bad, f = bad_prime_data(build_classical("A", 3, "sc"))
    assert bad == set()
    assert f == 4
    with pytest.raises(Reducible):
        bad_prime_data(build_classical("D", 2, "sc"))


def test_table_check_all_columns():
    report = table_check()
    assert report["ok"], report
    assert report["E7"]["row2"] == [2, 3, 5, 7]
    assert report["G2"]["row1"] == [2, 3]


def test_intermediate_lattice_validation():
    # Z^4 sits between Q and P for D4
    rd = build_classical("D", 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert rd.rank == 4
    with pytest.raises(InvalidLattice):
        build_classical("D", 4, [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])


def d4_w1_w2():
    rd = build_classical("D", 4, "sc")
    w1 = signed_perm_element(rd, [0, 1, 2, 3], [-1, 1, 1, -1])   # eps_1 eps_{2n}
    m = signed_perm_element(rd, [3, 2, 1, 0], [1, 1, 1, 1])
    w2 = WeylElement(rd, -Mat.identity(4) * m.matrix)
    return rd, w1, w2


def test_lambda_pair_d4_w1_w2():
    rd, w1, w2 = d4_w1_w2()
    res = lambda_pair(rd, w1, w2)
    expected = {(1, 0, -1, 0), (1, -1, 0, 0), (0, 1, 0, 1), (0, 0, 1, 1)}
    assert set(res.roots) == expected
    assert res.lam == (2, 0, 0, 2)
    assert res.trivial  # (1/2)(2n-2)(e1 + e_2n) lies in the coroot lattice


def test_lambda_pair_self_is_trivial():
    rd, w1, _ = d4_w1_w2()
    res = lambda_pair(rd, w1, w1)
    assert res.roots == ()
    assert res.trivial


def test_lambda_pair_w1_w0_empty():
    # w0 elliptic of cycle type (1,1) in the consecutive-negative-cycle form
    rd, w1, w2 = d4_w1_w2()
    w0 = signed_perm_element(rd, [0, 1, 2, 3], [-1, -1, -1, -1])
    res = lambda_pair(rd, w1, w0)
    assert res.roots == ()
    assert res.trivial


def test_lambda_pair_requires_commuting():
    rd = build_classical("D", 4, "sc")
    s1 = WeylElement(rd, rd.reflection(rd.simple_roots[0]))
    s2 = WeylElement(rd, rd.reflection(rd.simple_roots[1]))
    with pytest.raises(NotCommuting):
        lambda_pair(rd, s1, s2)


def test_lambda_antisymmetry_shadow():
    # the two half-classes are inverse: [w_u, w_v] * [w_v, w_u] = 1
    rd, w1, w2 = d4_w1_w2()
    a = lambda_pair(rd, w1, w2).half_class_coords
    b = lambda_pair(rd, w2, w1).half_class_coords
    assert (a + b).is_zero()
    w0 = signed_perm_element(rd, [0, 1, 2, 3], [-1, -1, -1, -1])
    for u, v in [(w1, w0), (w2, w0), (w1, w2)]:
        x = lambda_pair(rd, u, v).half_class_coords
        y = lambda_pair(rd, v, u).half_class_coords
        assert (x + y).is_zero()


def test_tits_cocycle_identity_small():
    # twisted 2-cocycle law: z(u,v) + z(uv,w) = u.z(v,w) + z(u,vw) in Xv/Z
    for kind, n in [("A", 2), ("B", 2), ("D", 4)]:
        rd = build_classical(kind, n, "sc")
        w = rd.weyl_group()
        sample = w[:: max(1, len(w) // 8)]
        for mu in sample[:6]:
            for mv in sample[:6]:
                for mw in sample[:6]:
                    lhs = tits_cocycle(rd, mu, mv) + tits_cocycle(rd, mu * mv, mw)
                    zvw = tits_cocycle(rd, mv, mw)
                    acted = zvw.act(rd.cochar_coord_matrix(mu))
                    rhs = acted + tits_cocycle(rd, mu, mv * mw)
                    assert lhs == rhs


def test_tits_cocycle_antisymmetrization_is_lambda():
    rd, w1, w2 = d4_w1_w2()
    z12 = tits_cocycle(rd, w1.matrix, w2.matrix)
    z21 = tits_cocycle(rd, w2.matrix, w1.matrix)
    lam = lambda_pair(rd, w1, w2).half_class_coords
    assert (z12 - z21) == lam or (z12 - z21) == -lam


def test_sl2_tits_square():
    rd = build_classical("A", 1, "sc")
    s = WeylElement(rd, rd.reflection(rd.simple_roots[0]))
    z = tits_cocycle(rd, s.matrix, s.matrix)
    # n(s)^2 = alpha_vee(-1): one half-coroot, nontrivial in the sc lattice
    assert not z.is_zero()
    assert (2 * z).is_zero()


def test_signed_permutation_and_ellipticity():
    rd = build_classical("D", 4, "sc")
    w0 = signed_perm_element(rd, [0, 1, 2, 3], [-1, -1, -1, -1])
    assert w0.is_elliptic()
    data = w0.cycle_sign_data()
    assert all(flips % 2 == 1 for _, flips in data)
    # a non-elliptic signed permutation: single sign flip pair leaves fixed vectors
    w = signed_perm_element(rd, [0, 1, 2, 3], [-1, -1, 1, 1])
    assert not w.is_elliptic()
    assert any(flips % 2 == 0 for _, flips in w.cycle_sign_data())


def test_json_roundtrip():
    rd = build_classical("C", 3, "ad")
    data = rd.to_json()
    rd2 = RootDatum.from_json(data)
    assert rd2.roots == rd.roots
    assert rd2.coroots == rd.coroots
    assert rd2.basis == rd.basis


def test_prime_support():
    assert prime_support(192) == {2, 3}
    assert prime_support(1) == set()
