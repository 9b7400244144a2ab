import random
from fractions import Fraction

import pytest

from k3lat.exact_arith import IntMatrix
from k3lat.lattice_core import (
    Lattice,
    LatticeError,
    disc_class,
    discriminant_group,
    is_even,
    is_p_elementary,
    lattice_A1,
    lattice_D4,
    lattice_by_name,
    lattice_hyperbolic2,
    orthogonal_complement,
    pairing,
)


def test_constructor_validation():
    with pytest.raises(LatticeError):
        Lattice(IntMatrix([[0, 1], [2, 0]]))  # not symmetric
    with pytest.raises(LatticeError):
        Lattice(IntMatrix([[1, 1], [1, 1]]))  # degenerate
    with pytest.raises(LatticeError):
        Lattice(IntMatrix([[2]]), ("a", "b"))


def test_named_constructors():
    assert lattice_by_name("A1").gram.entries == ((-2,),)
    assert lattice_by_name("hyperbolic2").gram.entries == ((2,),)
    assert lattice_by_name("D4").rank == 4
    with pytest.raises(LatticeError):
        lattice_by_name("E8")


def test_pairing_examples():
    a1 = lattice_A1()
    a_dual = a1.dual_basis_vector(0)
    assert a_dual.coords == (Fraction(-1, 2),)
    assert pairing(a_dual, a_dual) == Fraction(-1, 2)

    d4 = lattice_D4()
    d1_dual = d4.dual_basis_vector(0)
    assert pairing(d1_dual, d1_dual) == -1
    assert pairing(d4.zero(), d1_dual) == 0


def test_pairing_lattice_mismatch():
    with pytest.raises(LatticeError):
        pairing(lattice_A1().basis_vector(0), lattice_hyperbolic2().basis_vector(0))


def test_dual_basis_pairs_as_kronecker():
    d4 = lattice_D4()
    for i in range(4):
        for j in range(4):
            assert pairing(d4.dual_basis_vector(i), d4.basis_vector(j)) == (1 if i == j else 0)


def test_discriminant_group_a1():
    a1 = lattice_A1()
    grp = discriminant_group(a1)
    assert [f for f in grp.invariant_factors if f > 1] == [2]
    assert grp.order == 2
    # the dual generator represents the nonzero class
    cls = grp.class_of(a1.dual_basis_vector(0))
    assert not cls.is_zero()
    assert len(grp.generators) == 1
    diff = grp.generators[0] - a1.dual_basis_vector(0)
    assert grp.class_of(diff).is_zero() or grp.class_of(grp.generators[0]) == cls


def test_discriminant_group_d4():
    d4 = lattice_D4()
    grp = discriminant_group(d4)
    assert [f for f in grp.invariant_factors if f > 1] == [2, 2]
    assert grp.order == 4
    c1 = grp.class_of(d4.dual_basis_vector(0))
    c4 = grp.class_of(d4.dual_basis_vector(3))
    assert not c1.is_zero() and not c4.is_zero() and c1 != c4
    # d1-dual and d4-dual generate: their classes and the sum cover the nonzero classes
    assert not (c1 + c4).is_zero()
    # the center dual vector is integral, so its class vanishes
    assert grp.class_of(d4.dual_basis_vector(2)).is_zero()


def test_discriminant_group_unimodular():
    u = Lattice(IntMatrix([[1, 0], [0, -1]]))
    grp = discriminant_group(u)
    assert grp.order == 1
    assert grp.generators == ()


def test_disc_class_examples():
    d4 = lattice_D4()
    grp = discriminant_group(d4)
    assert grp.class_of(d4.basis_vector(1)).is_zero()
    v = d4.dual_basis_vector(0) + d4.dual_basis_vector(3)
    cls = grp.class_of(v)
    assert cls == grp.class_of(d4.dual_basis_vector(0)) + grp.class_of(d4.dual_basis_vector(3))
    assert not cls.is_zero()


def test_disc_class_rejects_non_dual_vectors():
    a1 = lattice_A1()
    with pytest.raises(LatticeError):
        disc_class(a1, a1.vector([Fraction(1, 3)]))


def test_is_even():
    assert is_even(lattice_A1())
    assert not is_even(Lattice(IntMatrix([[1]])))
    assert is_even(lattice_D4())


def test_is_p_elementary():
    assert is_p_elementary(lattice_A1(), 2)
    assert not is_p_elementary(lattice_D4(), 3)
    a3 = Lattice(IntMatrix([[-2, 1, 0], [1, -2, 1], [0, 1, -2]]))
    assert not is_p_elementary(a3, 2)  # discriminant Z/4
    assert is_p_elementary(Lattice(IntMatrix([[1]])), 5)  # trivial group


def test_orthogonal_complement_simple():
    l = Lattice(IntMatrix.block_diagonal([IntMatrix([[2]]), IntMatrix([[-2]])]))
    comp = orthogonal_complement(l, l.basis_vector(0))
    assert comp.lattice.gram.entries == ((-2,),)


def test_orthogonal_complement_diagonal_vector():
    l = Lattice(IntMatrix.block_diagonal([IntMatrix([[-2]]), IntMatrix([[-2]])]))
    v = l.vector([1, 1])
    comp = orthogonal_complement(l, v)
    assert comp.lattice.rank == 1
    assert comp.lattice.gram.entries == ((-4,),)
    emb = comp.to_ambient(comp.lattice.basis_vector(0))
    assert sorted(abs(int(c)) for c in emb.coords) == [1, 1]


def test_orthogonal_complement_requires_membership():
    a1 = lattice_A1()
    with pytest.raises(LatticeError):
        orthogonal_complement(a1, a1.vector([Fraction(1, 2)]))


def test_complement_is_saturated():
    from k3lat.exact_arith import snf

    l = Lattice(
        IntMatrix(
            [
                [2, 1, 0],
                [1, -2, 1],
                [0, 1, -4],
            ]
        )
    )
    comp = orthogonal_complement(l, l.basis_vector(0))
    factors = snf(comp.basis_in_ambient).invariant_factors
    assert all(f == 1 for f in factors)


def test_disc_quadratic_well_defined_mod_2z():
    rng = random.Random(23)
    d4 = lattice_D4()
    v = d4.dual_basis_vector(0)
    base_norm = pairing(v, v)
    for _ in range(20):
        shift = d4.vector([rng.randrange(-4, 5) for _ in range(4)])
        w = v + shift
        delta = pairing(w, w) - base_norm
        assert delta.denominator == 1 and int(delta) % 2 == 0


def test_order_matches_det_on_builtins():
    for name in ("A1", "D4", "hyperbolic2"):
        lat = lattice_by_name(name)
        assert discriminant_group(lat).order == abs(lat.det())


def test_lattice_json_roundtrip():
    d4 = lattice_D4()
    again = Lattice.from_json_obj(d4.to_json_obj())
    assert again.gram.entries == d4.gram.entries
    assert again.labels == d4.labels
