import functools
import json
from fractions import Fraction

import pytest

from cuspidor.centralizer import (
    NormalizerElement,
    ParameterDatum,
    admissible_cycle_types,
    centralizer,
    d2n_verify,
    d2n_w_elements,
    mult_one_check_suite,
)
from cuspidor.errors import InvalidCycleType
from cuspidor.exactcore import Mat, QV
from cuspidor.fixture_gen import (
    build_biquadratic,
    build_d4_sc,
    build_spin9,
    datum_from_json,
    datum_to_json,
)
from cuspidor.rootdata import build_classical, lambda_pair


@functools.lru_cache(maxsize=None)
def biquadratic_report():
    datum = build_biquadratic()
    return datum, centralizer(datum)


@functools.lru_cache(maxsize=None)
def spin9_report():
    datum = build_spin9()
    return datum, centralizer(datum)


def test_normalizer_element_arithmetic():
    rd = build_classical("A", 2, "sc")
    w = rd.weyl_group()
    for m1 in w[:4]:
        for m2 in w[:4]:
            x = NormalizerElement(rd, QV([Fraction(1, 3), 0]), m1)
            y = NormalizerElement(rd, QV([0, Fraction(1, 2)]), m2)
            # associativity with a third element
            z = NormalizerElement(rd, QV([Fraction(1, 5), Fraction(2, 5)]), w[1])
            lhs = x.mul(y).mul(z)
            rhs = x.mul(y.mul(z))
            assert lhs == rhs
            assert x.mul(x.inverse()).is_identity()


def test_tits_commutator_matches_lambda_pair():
    # [n(u), n(v)] = lambda_{u,v}(-1) for commuting u, v
    rd, w0, w1, w2 = d2n_w_elements(2, (1, 1))
    for u, v in [(w1, w2), (w1, w0), (w2, w0)]:
        x = NormalizerElement(rd, QV.zero(4), u.matrix)
        y = NormalizerElement(rd, QV.zero(4), v.matrix)
        comm = x.mul(y).mul(x.inverse()).mul(y.inverse())
        assert comm.weyl == Mat.identity(4)
        assert comm.tau == lambda_pair(rd, u, v).half_class_coords


def test_spin9_fixture():
    datum, rep = spin9_report()
    assert rep.fixed_torus.order == 16
    assert rep.fixed_torus.factors == (2, 2, 2, 2)
    assert rep.omega_factors == (2,)
    # the nontrivial omega element acts by coordinate reversal
    nontriv = next(m for m in rep.omega_matrices if m != Mat.identity(4))
    rev = Mat([[int(i + j == 3) for j in range(4)] for i in range(4)])
    assert nontriv == rev
    assert rep.s_phi_order == 32
    assert rep.mult_one is True


def test_spin9_verdict_consistent():
    verdict = mult_one_check_suite(spin9_report()[0], tag="unramified")
    assert verdict["mult_one"] is True
    assert verdict["consistent"]


def test_regular_datum_collapses():
    # PGL2-dual situation: an SL2-style torus point of full order has
    # trivial stabilizer, so S_phi is the fixed torus alone
    rd = build_classical("A", 1, "ad")
    q = 3
    # s of order q+1 = 4 in the adjoint torus with w0 = -1
    tau = (Fraction(1, 4),)
    datum = ParameterDatum(rd, [(tau, None, None),
                                ((0,), -Mat.identity(1), None)],
                           [("conj_power", 1, 0, q)], label="pgl2")
    rep = centralizer(datum)
    assert len(rep.omega_matrices) == 1
    assert rep.s_phi_order == rep.fixed_torus.order


def test_biquadratic_fixture():
    datum, rep = biquadratic_report()
    assert rep.omega_factors == (2, 2)
    assert rep.mult_one is False
    assert rep.fixed_torus.order == 32

    # the image in the adjoint quotient: (Z/2)^3 with the delta = -1 class
    from cuspidor.clifford import (
        ConcreteGroup, Pushout, commutator_function, has_multiplicity_one,
        transform,
    )
    from cuspidor.exactcore import quotient_by
    rd = datum.rd
    a_grp = rep.fixed_torus
    pair_rows = [rd.pairing_row(rd.roots[i]) for i in rd.simple_idx]

    def to_ad(vec):
        return tuple(sum(Fraction(r) * c for r, c in zip(row, vec.coords)) % 1
                     for row in pair_rows)

    kernel = [c for c in a_grp.elements()
              if all(x == 0 for x in to_ad(a_grp.lift(c)))]
    quot = quotient_by(a_grp, kernel)
    assert quot.group.factors == (2, 2, 2)
    k = len(a_grp.factors)
    cols = [quot.project(tuple(int(i == j) for i in range(k))) for j in range(k)]
    push = Mat([[cols[j][i] for j in range(k)]
                for i in range(len(quot.group.factors))])
    ext_ad = transform(rep.extension, Pushout(push, quot.group.factors))
    ok, _ = has_multiplicity_one(ext_ad)
    assert not ok
    # commutator of the two non-torus generators in root-value coordinates
    grp = ConcreteGroup(rep.extension)
    c1, c2 = (1, 0), (0, 1)
    word = grp.mul(grp.mul(grp.section(c1), grp.section(c2)),
                   grp.mul(grp.inv(grp.section(c1)), grp.inv(grp.section(c2))))
    rv = to_ad(a_grp.lift(word[0]))
    assert rv == (0, 0, 0, Fraction(1, 2), 0, Fraction(1, 2))
    q_ad, cls = commutator_function(ext_ad, c1, c2)
    assert cls != q_ad.group.zero


def test_biquadratic_verdict_no_contradiction():
    verdict = mult_one_check_suite(biquadratic_report()[0], tag="ramified-example")
    assert verdict["mult_one"] is False
    assert verdict["consistent"]  # untagged/ramified data may fail


def test_d4_sc_fixture():
    datum = build_d4_sc()
    rep = centralizer(datum)
    assert rep.omega_factors == (2, 2)
    assert rep.mult_one is True
    verdict = mult_one_check_suite(datum, tag="simply-connected")
    assert verdict["consistent"]


def test_centralizer_conjugation_invariance():
    datum, rep1 = spin9_report()
    rd = datum.rd
    w = rd.weyl_group()
    conj = datum.conjugate(w[7])
    rep2 = centralizer(conj)
    assert rep1.fixed_torus.order == rep2.fixed_torus.order
    assert len(rep1.omega_matrices) == len(rep2.omega_matrices)
    assert rep1.mult_one == rep2.mult_one


def test_fixture_json_roundtrip_and_regeneration():
    import importlib.resources as res
    for name, builder in [("spin9", build_spin9),
                          ("biquadratic", build_biquadratic),
                          ("d4_sc", build_d4_sc)]:
        text = (res.files("cuspidor") / "fixtures" / f"{name}.json").read_text()
        stored = json.loads(text)
        datum = datum_from_json(stored)
        rebuilt = datum_to_json(builder(), stored.get("meta"))
        assert rebuilt == stored, f"checked-in {name}.json is stale"
        assert datum.label == stored["label"]


def test_d2n_verify_cases():
    r = d2n_verify(2, 1, (1, 1))
    assert r.ok and r.commutator_class_trivial
    r = d2n_verify(2, 3, (1, 1))
    assert r.b == 0 and r.ok
    r = d2n_verify(3, 5, (1, 2))
    assert r.ok
    assert r.half_lambda_w1_w2_integral
    # edge coordinates of lambda_{w2,w0} are b on both ends
    assert r.lam[0] == r.b and r.lam[-1] == r.b


def test_d2n_lambda_w1_w2_closed_form():
    for n in (2, 3, 4):
        rd, w0, w1, w2 = d2n_w_elements(n, tuple([1] * n))
        res = lambda_pair(rd, w1, w2)
        rank = 2 * n
        expect = {tuple(int(i == 0) - int(i == j) for i in range(rank))
                  for j in range(1, rank - 1)}
        expect |= {tuple(int(i == j) + int(i == rank - 1) for i in range(rank))
                   for j in range(1, rank - 1)}
        assert set(res.roots) == expect
        lam = [0] * rank
        lam[0] = 2 * n - 2
        lam[-1] = 2 * n - 2
        assert res.lam == tuple(lam)
        assert res.trivial


def test_d2n_lambda_w2_w0_five_line_union():
    # the explicit union of the proof, as the independent oracle
    for n, lens in [(2, (1, 1)), (3, (1, 2)), (4, (1, 1, 2)), (4, (1, 3))]:
        rd, w0, w1, w2 = d2n_w_elements(n, lens)
        res = lambda_pair(rd, w2, w0)
        starts = []
        s = 0
        for l in lens:
            starts.append(s + 1)  # 1-indexed cycle boundaries i_a
            s += l
        rank = 2 * n
        iset = set(starts)
        ipset = {rank + 1 - i for i in starts}
        bset = iset | ipset
        nxt = {starts[a]: (starts[a + 1] if a + 1 < len(starts) else n + 1)
               for a in range(len(starts))}
        expect = set()

        def root(i, j, sign):
            v = [0] * rank
            v[i - 1] += 1
            v[j - 1] += sign
            return tuple(v)

        for i in iset:
            for j in range(i + 1, nxt[i]):
                expect.add(root(i, j, -1))
                expect.add(root(i, j, +1))
            for j in range(nxt[i], rank + 1):
                if j > i and j not in bset:
                    expect.add(root(i, j, -1))
        for ip in ipset:
            for j in range(ip + 1, rank + 1):
                if j not in bset:
                    expect.add(root(ip, j, -1))
        for j in iset:
            for i in range(1, j):
                if i not in bset:
                    expect.add(root(i, j, +1))
        for jp in ipset:
            i0 = rank + 1 - (nxt[rank + 1 - jp])
            for i in range(1, jp):
                if i not in bset and i <= i0:
                    expect.add(root(i, jp, +1))
        assert set(res.roots) == expect, (n, lens)


def test_d2n_full_sweep_small():
    for n in (2, 3):
        for q in (1, 3, 5):
            for lens in admissible_cycle_types(n):
                r = d2n_verify(n, q, lens)
                assert r.ok, (n, q, lens)
                assert r.b % 2 == 0
                assert r.lift_w1_fixed and r.lift_w2_found


def test_d2n_rejects_bad_cycles():
    with pytest.raises(InvalidCycleType):
        d2n_verify(3, 3, (2, 1))
    with pytest.raises(InvalidCycleType):
        d2n_verify(2, 4, (1, 1))
    with pytest.raises(InvalidCycleType):
        d2n_verify(2, 3, (1, 2))


def test_admissible_cycle_types():
    assert admissible_cycle_types(2) == [(1, 1)]
    assert set(admissible_cycle_types(4)) == {(1, 1, 1, 1), (1, 1, 2),
                                              (1, 2, 1), (1, 3)}


def test_positive_rank_fixed_torus_reported():
    # identity twist: the whole torus is fixed, so the extension is omitted
    rd = build_classical("A", 1, "ad")
    datum = ParameterDatum(rd, [((Fraction(1, 2),), None, None)], [])
    rep = centralizer(datum)
    from cuspidor.exactcore import RankReport
    assert isinstance(rep.fixed_torus, RankReport)
    assert rep.fixed_torus.free_rank == 1
    assert rep.extension is None
    assert "positive rank" in rep.notes[0]
