import random

import pytest

from cuspidor.clifford import (
    ConcreteGroup,
    ExtensionDescriptor,
    Pullback,
    Pushout,
    census_summary,
    commutator_function,
    dihedral8_central_descriptor,
    dihedral8_cyclic_descriptor,
    has_multiplicity_one,
    irrep_census,
    q8_descriptor,
    random_descriptor,
    transform,
)
from cuspidor.dixon import (
    brute_force_census,
    oracle_multiplicity_one,
    restriction_multiplicities,
)
from cuspidor.errors import NotEquivariant
from cuspidor.exactcore import Mat


def direct_product(a_factors, c_factors):
    k = len(a_factors)
    return ExtensionDescriptor(a_factors, c_factors,
                               [Mat.identity(k)] * len(c_factors), {})


def test_concrete_group_roundtrip():
    ext = q8_descriptor()
    g = ConcreteGroup(ext)
    assert len(g.elements) == 8
    for x in g.elements:
        assert g.mul(x, g.inv(x)) == g.identity
        assert g.mul(g.inv(x), x) == g.identity
    # Q8 has a unique element of order 2
    assert sum(1 for x in g.elements if g.order_of(x) == 2) == 1


def test_commutator_q8():
    ext = q8_descriptor()
    c1, c2 = (1, 0), (0, 1)
    quot, cls = commutator_function(ext, c1, c2)
    assert cls != quot.group.zero
    _, cls_same = commutator_function(ext, c1, c1)
    assert cls_same == quot.group.zero


def test_commutator_direct_product_trivial():
    ext = direct_product([4], [2, 2])
    for c1 in ext.C.elements():
        for c2 in ext.C.elements():
            quot, cls = commutator_function(ext, c1, c2)
            assert cls == quot.group.zero


def test_multiplicity_one_q8_false():
    ok, witness = has_multiplicity_one(q8_descriptor())
    assert not ok
    c1, c2, rho = witness
    # the witness character of A is nontrivial on the section commutator
    grp = ConcreteGroup(q8_descriptor())
    word = grp.mul(grp.mul(grp.section(c1), grp.section(c2)),
                   grp.mul(grp.inv(grp.section(c1)), grp.inv(grp.section(c2))))
    assert rho(word[0]) != 0


def test_multiplicity_one_dihedral_presentations():
    ok, _ = has_multiplicity_one(dihedral8_central_descriptor())
    assert not ok
    ok, _ = has_multiplicity_one(dihedral8_cyclic_descriptor())
    assert ok  # cyclic quotient always has multiplicity one


def test_census_q8():
    entries = irrep_census(q8_descriptor())
    assert census_summary(entries) == {1: 4, 2: 1}
    two = next(e for e in entries if e.dimension == 2)
    assert two.multiplicity == 2  # central character seen twice


def test_census_dihedral_cyclic():
    entries = irrep_census(dihedral8_cyclic_descriptor())
    assert census_summary(entries) == {1: 4, 2: 1}
    two = next(e for e in entries if e.dimension == 2)
    assert two.multiplicity == 1  # mult-one presentation of the same group


def test_census_abelian():
    ext = direct_product([3], [2])
    assert census_summary(irrep_census(ext)) == {1: 6}


def test_oracle_q8():
    table, mults = restriction_multiplicities(q8_descriptor())
    assert table.degrees() == [1, 1, 1, 1, 2]
    two = table.degrees().index(2)
    central = [per for ch, per in zip(table.chars, mults)
               if int(ch[0].rational_value()) == 2][0]
    assert list(central.values()) == [2]
    assert not oracle_multiplicity_one(q8_descriptor())


def test_oracle_s3_shape():
    ext = ExtensionDescriptor([3], [2], [Mat([[-1]])], {})
    table, _ = restriction_multiplicities(ext)
    assert table.degrees() == [1, 1, 2]


def test_oracle_abelian():
    ext = direct_product([4], [2])
    table, mults = restriction_multiplicities(ext)
    assert table.degrees() == [1] * 8
    assert all(sorted(per.values()) == [1] for per in mults)


def test_transform_pushout_kills_q8():
    ext = q8_descriptor()
    out = transform(ext, Pushout(Mat([[0]]), []))
    ok, _ = has_multiplicity_one(out)
    assert ok


def test_transform_pullback_cyclic():
    ext = q8_descriptor()
    out = transform(ext, Pullback(Mat([[1], [0]]), [2]))
    ok, _ = has_multiplicity_one(out)
    assert ok


def test_transform_product():
    ext = q8_descriptor()
    prod = transform(ext, direct_product([3], [2]))
    ok, _ = has_multiplicity_one(prod)
    assert not ok
    assert prod.order() == 8 * 6


def test_transform_pushout_equivariance_checked():
    # A = Z/2 x Z/2 with swap action; projection to the first coordinate
    # is not equivariant
    swap = Mat([[0, 1], [1, 0]])
    ext = ExtensionDescriptor([2, 2], [2], [swap], {})
    with pytest.raises(NotEquivariant):
        transform(ext, Pushout(Mat([[1, 0]]), [2]))


def test_oracle_agreement_small_corpus():
    rng = random.Random(20240808)
    checked = 0
    for _ in range(40):
        ext = random_descriptor(rng, max_order=64)
        ok, _ = has_multiplicity_one(ext)
        assert ok == oracle_multiplicity_one(ext), ext.to_json()
        # census multiplicities agree with the oracle's restriction counts
        entries = irrep_census(ext)
        table, mults = restriction_multiplicities(ext)
        assert sorted(e.dimension for e in entries for _ in range(e.count)) == \
            table.degrees()
        checked += 1
    assert checked == 40


def test_cor_abext_dimension_identity():
    # the bracket reading of the dimension identity: dim(pi) = |orbit| * m,
    # and the count of irreducibles above the orbit is |C_rho| / m^2
    rng = random.Random(7)
    for _ in range(15):
        ext = random_descriptor(rng, max_order=48)
        for e in irrep_census(ext):
            assert e.dimension == e.orbit_size * e.multiplicity
            stab_order = ext.C.order // e.orbit_size
            assert e.count * e.multiplicity ** 2 == stab_order


def test_extension_json_roundtrip():
    ext = q8_descriptor()
    data = ext.to_json()
    back = ExtensionDescriptor.from_json(data)
    assert back.cocycle == ext.cocycle
    assert back.A.factors == ext.A.factors
