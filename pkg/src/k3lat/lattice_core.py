"""Lattices with explicit Gram matrices and labeled bases.

A lattice here is a free Z-module with a non-degenerate symmetric integer
bilinear form, given by its Gram matrix in a distinguished basis.  Dual
vectors are stored as rational coordinate vectors in that same basis, so
the lattice itself is exactly the set of integer-coordinate vectors and
the dual consists of vectors pairing integrally with the whole basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_arith import (
    ExactArithError,
    IntMatrix,
    RatMatrix,
    det,
    inertia,
    invert,
    invert_rational,
    kernel_basis,
    snf,
)


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    gram: IntMatrix
    labels: tuple[str, ...]

    def __init__(self, gram: IntMatrix, labels: Sequence[str] | None = None):
        if not gram.is_symmetric():
            raise LatticeError("Gram matrix must be symmetric")
        if det(gram) == 0:
            raise LatticeError("Gram matrix must be non-degenerate")
        if labels is None:
            labels = tuple(f"e{i}" for i in range(gram.rows))
        labels = tuple(labels)
        if len(labels) != gram.rows:
            raise LatticeError("label count must equal the rank")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "labels", labels)

    @property
    def rank(self) -> int:
        return self.gram.rows

    def gram_rat(self) -> RatMatrix:
        cached = getattr(self, "_gram_rat", None)
        if cached is None:
            cached = self.gram.to_rational()
            object.__setattr__(self, "_gram_rat", cached)
        return cached

    def det(self) -> int:
        return det(self.gram)

    def inertia(self) -> tuple[int, int, int]:
        return inertia(self.gram)

    def is_negative_definite(self) -> bool:
        return self.inertia() == (0, self.rank, 0)

    def is_hyperbolic(self) -> bool:
        return self.inertia() == (1, self.rank - 1, 0)

    def basis_vector(self, i: int) -> "DualVector":
        coords = [Fraction(0)] * self.rank
        coords[i] = Fraction(1)
        return DualVector(self, tuple(coords))

    def zero(self) -> "DualVector":
        return DualVector(self, tuple(Fraction(0) for _ in range(self.rank)))

    def vector(self, coords: Sequence) -> "DualVector":
        return DualVector(self, tuple(Fraction(c) for c in coords))

    def dual_basis_matrix(self) -> RatMatrix:
        """Coordinates of the dual basis: column j holds the j-th dual vector."""
        return invert(self.gram)

    def dual_basis_vector(self, j: int) -> "DualVector":
        m = self.dual_basis_matrix()
        return DualVector(self, tuple(m.entries[i][j] for i in range(self.rank)))

    def to_json_obj(self) -> dict:
        return {"labels": list(self.labels), "gram": self.gram.to_json_obj()}

    @staticmethod
    def from_json_obj(obj: dict) -> "Lattice":
        return Lattice(IntMatrix.from_json_obj(obj["gram"]), tuple(obj["labels"]))


@dataclass(frozen=True)
class DualVector:
    """Element of L tensor Q in lattice coordinates; integral coords mean membership in L."""

    lattice: Lattice
    coords: tuple[Fraction, ...]

    def __init__(self, lattice: Lattice, coords: Sequence):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != lattice.rank:
            raise LatticeError("coordinate length must equal the rank")
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "coords", coords)

    def __add__(self, other: "DualVector") -> "DualVector":
        self._same(other)
        return DualVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DualVector") -> "DualVector":
        self._same(other)
        return DualVector(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DualVector":
        return DualVector(self.lattice, tuple(-a for a in self.coords))

    def scale(self, c) -> "DualVector":
        c = Fraction(c)
        return DualVector(self.lattice, tuple(c * a for a in self.coords))

    def _same(self, other: "DualVector") -> None:
        if self.lattice != other.lattice:
            raise LatticeError("vectors live in different lattices")

    def is_lattice_vector(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def int_coords(self) -> tuple[int, ...]:
        if not self.is_lattice_vector():
            raise LatticeError("vector is not in the lattice")
        return tuple(int(c) for c in self.coords)

    def pair_with_basis(self) -> tuple[Fraction, ...]:
        return self.lattice.gram_rat().mul_vec(self.coords)

    def is_dual_vector(self) -> bool:
        """True when the vector pairs integrally with every basis vector."""
        return all(x.denominator == 1 for x in self.pair_with_basis())

    def norm(self) -> Fraction:
        return pairing(self, self)


def pairing(u: DualVector, v: DualVector) -> Fraction:
    """Bilinear form extended to the dual: u^T * Gram * v, exact."""
    u._same(v)
    gv = u.lattice.gram_rat().mul_vec(v.coords)
    return sum((a * b for a, b in zip(u.coords, gv)), Fraction(0))


# ---------------------------------------------------------------------------
# named constructors
# ---------------------------------------------------------------------------

def lattice_A1() -> Lattice:
    """Rank-1 root lattice with Gram (-2)."""
    return Lattice(IntMatrix([[-2]]), ("a",))


def lattice_D4() -> Lattice:
    """Rank-4 root lattice of the four-node fork diagram (center d3)."""
    gram = IntMatrix(
        [
            [-2, 0, 1, 0],
            [0, -2, 1, 0],
            [1, 1, -2, 1],
            [0, 0, 1, -2],
        ]
    )
    return Lattice(gram, ("d1", "d2", "d3", "d4"))


def lattice_hyperbolic2() -> Lattice:
    """Rank-1 lattice with Gram (2); carries a degree-2 polarization class."""
    return Lattice(IntMatrix([[2]]), ("h",))


_NAMED = {"A1": lattice_A1, "D4": lattice_D4, "hyperbolic2": lattice_hyperbolic2}


def lattice_by_name(name: str) -> Lattice:
    try:
        return _NAMED[name]()
    except KeyError:
        raise LatticeError(f"unknown lattice name {name!r}") from None


# ---------------------------------------------------------------------------
# parity and elementarity
# ---------------------------------------------------------------------------

def is_even(lattice: Lattice) -> bool:
    """Every vector has even self-intersection iff all Gram diagonal entries are even."""
    return all(lattice.gram.entries[i][i] % 2 == 0 for i in range(lattice.rank))


def is_p_elementary(lattice: Lattice, p: int) -> bool:
    """True when the discriminant group is annihilated by the prime p."""
    return all(f in (1, p) for f in discriminant_group(lattice).invariant_factors)


# ---------------------------------------------------------------------------
# discriminant group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite quotient (dual lattice)/(lattice), with explicit generators.

    ``generators[i]`` is a dual vector whose class has order
    ``invariant_factors[i]``; factors equal to 1 are kept (with zero
    generators dropped) so classes are tuples over the full factor list.
    """

    lattice: Lattice
    invariant_factors: tuple[int, ...]
    generators: tuple[DualVector, ...]
    _u: IntMatrix

    @property
    def order(self) -> int:
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    def class_of(self, v: DualVector) -> "DiscClass":
        if v.lattice != self.lattice:
            raise LatticeError("vector lives in a different lattice")
        gv = v.pair_with_basis()
        if any(x.denominator != 1 for x in gv):
            raise LatticeError("vector does not pair integrally with the lattice")
        y = self._u.mul_vec([int(x) for x in gv])
        comp = tuple(y[i] % f for i, f in enumerate(self.invariant_factors))
        return DiscClass(self, comp)

    def zero_class(self) -> "DiscClass":
        return DiscClass(self, tuple(0 for _ in self.invariant_factors))

    def representative(self, cls: "DiscClass") -> DualVector:
        if cls.group is not self and cls.group != self:
            raise LatticeError("class belongs to a different group")
        rep = self.lattice.zero()
        gens = {i: g for i, g in zip(self._gen_indices(), self.generators)}
        for i, c in enumerate(cls.component):
            if c and i in gens:
                rep = rep + gens[i].scale(c)
        return rep

    def _gen_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.invariant_factors) if f > 1]


@dataclass(frozen=True)
class DiscClass:
    group: DiscriminantGroup
    component: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.component)

    def __add__(self, other: "DiscClass") -> "DiscClass":
        if self.group.lattice != other.group.lattice:
            raise LatticeError("classes from different groups")
        return DiscClass(
            self.group,
            tuple(
                (a + b) % f
                for a, b, f in zip(self.component, other.component, self.group.invariant_factors)
            ),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiscClass)
            and self.group.lattice == other.group.lattice
            and self.component == other.component
        )

    def __hash__(self):
        return hash((self.group.lattice, self.component))


_DISC_CACHE: dict[tuple, DiscriminantGroup] = {}


def discriminant_group(lattice: Lattice) -> DiscriminantGroup:
    """Invariant factors and generating dual vectors of the discriminant group.

    With U*G*V = S, the class of a dual vector v is U*(G v) reduced modulo
    the invariant factors, and the generator for factor d_i > 1 is the
    column of G^{-1} U^{-1} at position i.  Results are memoized per Gram
    matrix and label tuple.
    """
    key = (lattice.gram.entries, lattice.labels)
    cached = _DISC_CACHE.get(key)
    if cached is not None:
        return cached
    g = lattice.gram
    r = snf(g)
    factors = r.invariant_factors
    ginv_uinv = invert(g).mul(invert(r.u))
    gens = []
    for i, f in enumerate(factors):
        if f > 1:
            gens.append(
                DualVector(lattice, tuple(ginv_uinv.entries[k][i] for k in range(lattice.rank)))
            )
    grp = DiscriminantGroup(lattice, factors, tuple(gens), r.u)
    if grp.order != abs(det(g)):
        raise LatticeError("discriminant group order mismatch")
    for gen in gens:
        if not gen.is_dual_vector():
            raise LatticeError("discriminant generator does not pair integrally")
    _DISC_CACHE[key] = grp
    return grp


def disc_class(lattice: Lattice, v: DualVector) -> DiscClass:
    """Residue of v modulo the lattice inside the discriminant group."""
    return discriminant_group(lattice).class_of(v)


# ---------------------------------------------------------------------------
# orthogonal complements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sublattice:
    """A primitive sublattice presented by its own Gram plus an embedding.

    ``basis_in_ambient`` rows are the coordinates of the sublattice basis in
    the ambient lattice basis.
    """

    lattice: Lattice
    ambient: Lattice
    basis_in_ambient: IntMatrix

    def to_ambient(self, v: DualVector) -> DualVector:
        if v.lattice != self.lattice:
            raise LatticeError("vector not in the sublattice")
        n = self.ambient.rank
        coords = [Fraction(0)] * n
        for i, c in enumerate(v.coords):
            for j in range(n):
                coords[j] += c * self.basis_in_ambient.entries[i][j]
        return DualVector(self.ambient, tuple(coords))


def orthogonal_complement(lattice: Lattice, v: DualVector) -> Sublattice:
    """Saturated orthogonal complement of a lattice vector with v*v != 0."""
    if v.lattice != lattice:
        raise LatticeError("vector lives in a different lattice")
    if not v.is_lattice_vector():
        raise LatticeError("complement requires a lattice vector")
    if v.norm() == 0:
        raise LatticeError("complement requires a vector of nonzero norm")
    gv = [int(x) for x in v.pair_with_basis()]
    basis = kernel_basis(IntMatrix([gv]))
    b = IntMatrix(basis)
    gram = b.mul(lattice.gram).mul(b.transpose())
    labels = tuple(f"c{i}" for i in range(len(basis)))
    return Sublattice(Lattice(gram, labels), lattice, b)


def express_in_basis(basis_rows: RatMatrix, v: DualVector) -> tuple[Fraction, ...] | None:
    """Coordinates of v in the row basis, or None when v is outside the row span."""
    try:
        x = invert_rational(basis_rows.transpose()).mul_vec(v.coords)
    except ExactArithError:
        raise LatticeError("basis matrix is not invertible")
    return x
