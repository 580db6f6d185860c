import random
from fractions import Fraction

import pytest

from cuspidor.errors import InvalidAction
from cuspidor.exactcore import (
    FinAb,
    Mat,
    QV,
    RankReport,
    abelian_basis,
    coinvariants,
    qz_kernel,
    smith_normal_form,
    solve_affine,
    twisted_fixed_points,
)


def snf_check(m):
    u, d, v = smith_normal_form(m)
    assert u * m * v == d
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = [d.rows[i][i] for i in range(min(d.nrows, d.ncols))]
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    for i in range(d.nrows):
        for j in range(d.ncols):
            if i != j:
                assert d.rows[i][j] == 0
    return diag


def test_snf_spec_examples():
    diag = snf_check(Mat([[2, 0], [0, 3]]))
    assert diag == [1, 6]
    u, d, v = smith_normal_form(Mat.identity(3))
    assert d == Mat.identity(3)
    assert u == Mat.identity(3)
    assert v == Mat.identity(3)
    diag = snf_check(Mat([[0]]))
    assert diag == [0]


def test_snf_random_matrices():
    rng = random.Random(20240811)
    for _ in range(150):
        n = rng.randint(1, 4)
        m = rng.randint(1, 4)
        mat = Mat([[rng.randint(-9, 9) for _ in range(m)] for _ in range(n)])
        snf_check(mat)


def test_snf_deterministic():
    m = Mat([[4, 6, 2], [6, 4, 8]])
    first = smith_normal_form(m)
    again = smith_normal_form(m)
    assert first[0] == again[0] and first[1] == again[1] and first[2] == again[2]


def test_twisted_fixed_points_sl2_coxeter():
    g = twisted_fixed_points(Mat([[-3]]))
    assert isinstance(g, FinAb)
    assert g.factors == (4,)
    gen = g.gens[0]
    # the section really is fixed by F: (F-1)gen = 0 in Q/Z
    assert (Mat([[-3]]) - Mat.identity(1)).apply(gen.coords)[0] % 1 == 0


def test_twisted_fixed_points_identity_is_rank_report():
    rep = twisted_fixed_points(Mat.identity(2))
    assert isinstance(rep, RankReport)
    assert rep.free_rank == 2
    assert rep.torsion.order == 1


def test_twisted_fixed_points_order_two_twist():
    f = Mat([[0, -3], [-3, 0]])
    g = twisted_fixed_points(f)
    assert isinstance(g, FinAb)
    assert g.order == 8


def test_twisted_fixed_points_order_matches_det():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 3)
        f = Mat([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        d = (f - Mat.identity(n)).det()
        if d == 0:
            continue
        g = twisted_fixed_points(f)
        assert isinstance(g, FinAb)
        assert g.order == abs(d)
        # cross-check by exhaustive enumeration over denominators dividing |det|
        if abs(d) <= 24 and n <= 2:
            count = 0
            den = abs(d)
            for nums in _all_tuples(den, n):
                v = QV([Fraction(k, den) for k in nums])
                img = (f - Mat.identity(n)).apply(v.coords)
                if all(Fraction(x) % 1 == 0 for x in img):
                    count += 1
            assert count == g.order


def _all_tuples(den, n):
    if n == 0:
        yield ()
        return
    for head in range(den):
        for rest in _all_tuples(den, n - 1):
            yield (head,) + rest


def test_projection_roundtrip():
    g = twisted_fixed_points(Mat([[0, -3], [-3, 0]]))
    for coords in g.elements():
        v = g.lift(coords)
        assert g.project(v) == coords


def test_coinvariants_trivial_action():
    a = FinAb.abstract([2])
    q = coinvariants(a, [Mat.identity(1)])
    assert q.group.factors == (2,)


def test_coinvariants_inversion_on_z4():
    a = FinAb.abstract([4])
    q = coinvariants(a, [Mat([[-1]])])
    assert q.group.factors == (2,)
    assert q.project((2,)) == q.group.zero  # 2*gen dies
    assert q.project((1,)) != q.group.zero


def test_coinvariants_biquadratic_swap():
    # (Z/2)^3 with coordinates (eps, eta, delta), swapping eps <-> eta:
    # quotient has order 4 and (0,0,1) survives
    a = FinAb.abstract([2, 2, 2])
    swap = Mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    q = coinvariants(a, [swap])
    assert q.group.order == 4
    assert q.project((0, 0, 1)) != q.group.zero


def test_coinvariants_rejects_non_automorphism():
    a = FinAb.abstract([4])
    with pytest.raises(InvalidAction):
        coinvariants(a, [Mat([[2]])])


def test_coinvariants_projection_is_homomorphism():
    rng = random.Random(99)
    for factors, action in [((2, 4), Mat([[1, 0], [2, 3]])), ((8,), Mat([[3]])),
                            ((2, 2, 4), Mat([[0, 1, 0], [1, 0, 0], [0, 0, 3]]))]:
        a = FinAb.abstract(list(factors))
        q = coinvariants(a, [action])
        for _ in range(40):
            x = tuple(rng.randrange(d) for d in a.factors)
            y = tuple(rng.randrange(d) for d in a.factors)
            assert q.project(a.add(x, y)) == q.group.add(q.project(x), q.project(y))
        # (sigma - 1) a dies for every generator
        for j in range(len(a.factors)):
            e = tuple(int(i == j) for i in range(len(a.factors)))
            img = a.apply_matrix(action, e)
            diff = a.add(img, a.neg(e))
            assert q.project(diff) == q.group.zero


def test_solve_affine_homogeneous():
    sol = solve_affine(Mat([[-3]]), QV([0]))
    assert sol is not None
    assert sol.particular.is_zero()
    assert sol.kernel.order == 4
    assert len(sol.all()) == 4


def test_solve_affine_spec_example():
    sol = solve_affine(Mat([[-3]]), QV([Fraction(1, 2)]))
    assert sol is not None
    x = sol.particular.coords[0]
    assert (-4 * x) % 1 == Fraction(1, 2)


def test_solve_affine_no_solution():
    assert solve_affine(Mat.identity(1), QV([Fraction(1, 3)])) is None


def test_abelian_basis_klein():
    elems = [(0, 0), (0, 1), (1, 0), (1, 1)]

    def mul(a, b):
        return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)

    factors, basis, coords = abelian_basis(elems, mul, (0, 0))
    assert sorted(factors) == [2, 2]
    assert len(coords) == 4


def test_qz_kernel_nonsquare():
    m = Mat([[2, 0], [0, 3], [2, 3]])
    g = qz_kernel(m)
    assert isinstance(g, FinAb)
    for coords in g.elements():
        v = g.lift(coords)
        img = m.apply(v.coords)
        assert all(Fraction(x) % 1 == 0 for x in img)
