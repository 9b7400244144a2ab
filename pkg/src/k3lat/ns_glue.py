"""The labeled rank-22 direct sum, its glue vectors and Neron-Severi overlattices.

The base lattice is <2> + four copies of D4 + five copies of A1, with the
basis labeled after the polarization class, the sixteen exceptional
curves over the D4 points and the five exceptional curves over the A1
points.  Half-line classes are glue vectors of norm -2; adding all five
produces the overlattice of Artin invariant 2, and one extra class drops
the invariant to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_arith import IntMatrix, RatMatrix, det, hnf_rows, invert_rational
from .lattice_core import (
    DiscClass,
    DualVector,
    Lattice,
    discriminant_group,
    is_even,
    lattice_A1,
    lattice_D4,
    lattice_hyperbolic2,
    orthogonal_complement,
    pairing,
)
from .root_systems import (
    PositivityFunctional,
    _box_scan,
    ade_type,
    bounded_class_minimizers,
    enumerate_roots,
    irreducible_decomposition,
    root_type,
)


class GlueError(ValueError):
    pass


P_LABELS = ("00", "01", "10", "11")
Q_LABELS = ("0", "1", "w", "wb", "inf")
L_LABELS = ("inf", "0*", "1*", "*0", "*1")
EXTRA_GLUE_CHOICES = ("1", "w", "wb")


@dataclass(frozen=True)
class Summand:
    name: str
    kind: str  # "H", "D4" or "A1"
    offset: int
    rank: int


@dataclass(frozen=True)
class LabeledSum:
    """The rank-22 block direct sum with its summand table."""

    lattice: Lattice
    summands: tuple[Summand, ...]

    def summand(self, name: str) -> Summand:
        for s in self.summands:
            if s.name == name:
                return s
        raise GlueError(f"unknown summand {name!r}")

    def summand_lattice(self, s: Summand) -> Lattice:
        if s.kind == "H":
            return lattice_hyperbolic2()
        if s.kind == "D4":
            return lattice_D4()
        return lattice_A1()

    def component(self, v: DualVector, s: Summand) -> DualVector:
        """Projection of v onto one summand of the orthogonal decomposition."""
        coords = v.coords[s.offset : s.offset + s.rank]
        return DualVector(self.summand_lattice(s), coords)

    def assemble(self, parts: dict[str, Sequence[Fraction]]) -> DualVector:
        coords = [Fraction(0)] * self.lattice.rank
        for name, cs in parts.items():
            s = self.summand(name)
            if len(cs) != s.rank:
                raise GlueError(f"component length mismatch for {name}")
            for i, c in enumerate(cs):
                coords[s.offset + i] = Fraction(c)
        return DualVector(self.lattice, tuple(coords))

    def exceptional_basis_vectors(self) -> list[DualVector]:
        """The 21 basis classes of the D4 and A1 summands (not the polarization)."""
        out = []
        for s in self.summands:
            if s.kind == "H":
                continue
            for i in range(s.rank):
                out.append(self.lattice.basis_vector(s.offset + i))
        return out


def build_lambda() -> LabeledSum:
    """The rank-22 labeled sum: det -2^14, hyperbolic, discriminant (Z/2)^14."""
    blocks = [lattice_hyperbolic2().gram]
    labels = ["h"]
    summands = [Summand("H", "H", 0, 1)]
    off = 1
    for ab in P_LABELS:
        blocks.append(lattice_D4().gram)
        labels += [f"d{i}({ab})" for i in range(1, 5)]
        summands.append(Summand(f"P({ab})", "D4", off, 4))
        off += 4
    for g in Q_LABELS:
        blocks.append(lattice_A1().gram)
        labels.append(f"a({g})")
        summands.append(Summand(f"Q({g})", "A1", off, 1))
        off += 1
    lattice = Lattice(IntMatrix.block_diagonal(blocks), tuple(labels))
    return LabeledSum(lattice, tuple(summands))


# ---------------------------------------------------------------------------
# the distinguished dual vectors
# ---------------------------------------------------------------------------

_D4_DUAL_COLUMNS = {
    # columns of the inverse D4 Gram: coordinates of the dual basis vectors
    1: (Fraction(-1), Fraction(-1, 2), Fraction(-1), Fraction(-1, 2)),
    2: (Fraction(-1, 2), Fraction(-1), Fraction(-1), Fraction(-1, 2)),
    3: (Fraction(-1), Fraction(-1), Fraction(-2), Fraction(-1)),
    4: (Fraction(-1, 2), Fraction(-1, 2), Fraction(-1), Fraction(-1)),
}


def h_vee(ls: LabeledSum) -> DualVector:
    return ls.assemble({"H": (Fraction(1, 2),)})


def d_vee(ls: LabeledSum, i: int, ab: str) -> DualVector:
    return ls.assemble({f"P({ab})": _D4_DUAL_COLUMNS[i]})


def a_vee(ls: LabeledSum, g: str) -> DualVector:
    return ls.assemble({f"Q({g})": (Fraction(-1, 2),)})


@dataclass(frozen=True)
class GlueVector:
    name: str
    vector: DualVector

    def components(self, ls: LabeledSum) -> dict[str, DualVector]:
        return {s.name: ls.component(self.vector, s) for s in ls.summands}


def halfline_class(ls: LabeledSum, lam: str) -> GlueVector:
    """The half-line class attached to one of the five splitting lines."""
    hv = h_vee(ls)
    if lam == "inf":
        v = hv
        for g in Q_LABELS:
            v = v + a_vee(ls, g)
    elif lam == "0*":
        v = hv + d_vee(ls, 1, "00") + d_vee(ls, 1, "01") + a_vee(ls, "inf")
    elif lam == "1*":
        v = hv + d_vee(ls, 1, "10") + d_vee(ls, 1, "11") + a_vee(ls, "inf")
    elif lam == "*0":
        v = hv + d_vee(ls, 4, "00") + d_vee(ls, 4, "10") + a_vee(ls, "0")
    elif lam == "*1":
        v = hv + d_vee(ls, 4, "01") + d_vee(ls, 4, "11") + a_vee(ls, "0")
    else:
        raise GlueError(f"unknown half-line label {lam!r}")
    return GlueVector(f"F({lam})", v)


def extra_glue_class(ls: LabeledSum, c: str) -> GlueVector:
    """The extra class supported on P(00), P(11) and Q(c); drops the Artin invariant to 1."""
    if c not in EXTRA_GLUE_CHOICES:
        raise GlueError(f"extra glue label must be one of {EXTRA_GLUE_CHOICES}")
    v = h_vee(ls) + d_vee(ls, 2, "00") + d_vee(ls, 2, "11") + a_vee(ls, c)
    return GlueVector(f"G({c})", v)


# ---------------------------------------------------------------------------
# overlattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlatticeSpec:
    base: LabeledSum
    glue: tuple[GlueVector, ...]


@dataclass(frozen=True)
class OverlatticeResult:
    spec: OverlatticeSpec
    lattice: Lattice
    basis_in_base: RatMatrix  # rows: new basis in base coordinates
    base_in_result: IntMatrix  # rows: base basis in new coordinates
    index: int

    def to_result_coords(self, v: DualVector) -> tuple[int, ...] | None:
        """Integer coordinates of v in the overlattice basis, or None if outside."""
        x = invert_rational(self.basis_in_base.transpose()).mul_vec(v.coords)
        if any(c.denominator != 1 for c in x):
            return None
        return tuple(int(c) for c in x)

    def h_in_result(self) -> DualVector:
        return self.lattice.vector(self.base_in_result.entries[0])


def independence_check(
    ls: LabeledSum, classes: Sequence[GlueVector]
) -> tuple[bool, int]:
    """Rank over F2 of the glue classes inside the discriminant group."""
    grp = discriminant_group(ls.lattice)
    rows = []
    for gv in classes:
        cls = grp.class_of(gv.vector)
        rows.append([c % 2 for c in cls.component])
    rank = _f2_rank(rows)
    return rank == len(classes), rank


def _f2_rank(rows: list[list[int]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def build_overlattice(spec: OverlatticeSpec) -> OverlatticeResult:
    """Saturate the base plus glue into an integral even overlattice.

    Glue vectors must pair integrally with the base and each other and have
    even norms; the index equals 2 to the F2-rank of the glue classes and
    the determinant shrinks by the square of the index.
    """
    ls = spec.base
    base = ls.lattice
    n = base.rank
    for gv in spec.glue:
        if not gv.vector.is_dual_vector():
            raise GlueError(f"glue vector {gv.name} does not pair integrally with the base")
        norm = gv.vector.norm()
        if norm.denominator != 1 or int(norm) % 2 != 0:
            raise GlueError(f"glue vector {gv.name} has non-even norm {norm}")
    for i, a in enumerate(spec.glue):
        for b in spec.glue[i + 1 :]:
            p = pairing(a.vector, b.vector)
            if p.denominator != 1:
                raise GlueError(f"glue vectors {a.name}, {b.name} pair non-integrally")

    gen_rows = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    gen_rows += [list(gv.vector.coords) for gv in spec.glue]
    denom = 1
    for row in gen_rows:
        for c in row:
            denom = math.lcm(denom, c.denominator)
    int_rows = [[int(c * denom) for c in row] for row in gen_rows]
    basis_int = hnf_rows(IntMatrix(int_rows))
    if len(basis_int) != n:
        raise GlueError("overlattice basis has wrong rank")
    basis = RatMatrix([[Fraction(x, denom) for x in row] for row in basis_int])

    gram_rat = basis.mul(base.gram.to_rational()).mul(basis.transpose())
    if not gram_rat.is_integral():
        raise GlueError("overlattice form is not integral")
    gram = gram_rat.to_int()
    lat = Lattice(gram, tuple(f"n{i}" for i in range(n)))
    if not is_even(lat):
        raise GlueError("overlattice is not even")

    binv = invert_rational(basis.transpose())
    base_rows = []
    for i in range(n):
        e = [Fraction(1 if j == i else 0) for j in range(n)]
        x = binv.mul_vec(e)
        if any(c.denominator != 1 for c in x):
            raise GlueError("base vector escapes the overlattice")
        base_rows.append([int(c) for c in x])

    d_base = det(base.gram)
    d_new = det(gram)
    if d_base % d_new != 0:
        raise GlueError("determinant drop is not integral")
    ratio = d_base // d_new
    _, glue_rank = independence_check(ls, spec.glue)
    index = 2**glue_rank
    if ratio != index * index:
        raise GlueError("index does not match the F2-rank of the glue classes")
    return OverlatticeResult(
        spec=spec,
        lattice=lat,
        basis_in_base=basis,
        base_in_result=IntMatrix(base_rows),
        index=index,
    )


def artin_invariant(lattice: Lattice, p: int, ns_context: bool = False) -> int:
    """Half the p-adic valuation of minus the determinant, when det = -p^(2*sigma)."""
    d = lattice.det()
    if d >= 0:
        raise GlueError("determinant is not negative")
    m = -d
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    if m != 1 or e % 2 != 0 or e == 0:
        raise GlueError(f"determinant {d} is not of the form -{p}^(2*sigma)")
    sigma = e // 2
    if ns_context and lattice.rank == 22 and not (1 <= sigma <= 10):
        raise GlueError(f"Artin invariant {sigma} is impossible at rank 22")
    return sigma


# ---------------------------------------------------------------------------
# the exceptional-root analysis of the polarization complement
# ---------------------------------------------------------------------------

def canonical_positivity(ls: LabeledSum, target: Lattice, basis_in_base: RatMatrix) -> PositivityFunctional:
    """Positivity functional on a sublattice, induced by pairing against the
    sum of all dual basis vectors of the exceptional summands.

    That dual vector pairs to +1 with each of the 21 exceptional classes, so
    the distinguished simple roots come out positive.
    """
    w = ls.lattice.zero()
    for s in ls.summands:
        if s.kind == "H":
            continue
        sub = ls.summand_lattice(s)
        for j in range(s.rank):
            dv = sub.dual_basis_vector(j)
            w = w + ls.assemble({s.name: dv.coords})
    gw = ls.lattice.gram.to_rational().mul_vec(w.coords)
    p = basis_in_base.mul_vec(gw)
    coeffs = invert_rational(target.gram.to_rational()).mul_vec(p)
    return PositivityFunctional(target, tuple(coeffs))


@dataclass(frozen=True)
class ExceptionalRootReport:
    complement_rank: int
    complement_inertia: tuple[int, int, int]
    root_count: int
    component_types: tuple[str, ...]
    type_string: str
    total_component_rank: int


def exceptional_root_analysis(ns: OverlatticeResult) -> ExceptionalRootReport:
    """Roots orthogonal to the polarization class, decomposed and typed."""
    ls = ns.spec.base
    h = ns.h_in_result()
    comp = orthogonal_complement(ns.lattice, h)
    comp_in_base = comp.basis_in_ambient.to_rational().mul(ns.basis_in_base)
    alpha = canonical_positivity(ls, comp.lattice, comp_in_base)
    roots = enumerate_roots(comp.lattice)
    comps = irreducible_decomposition(roots)
    labels = [ade_type(c, alpha) for c in comps]
    counted: dict[str, int] = {}
    for lbl in labels:
        counted[lbl] = counted.get(lbl, 0) + 1
    ordered = sorted(counted.items(), key=lambda kv: (-int(kv[0][1:]), kv[0]))
    return ExceptionalRootReport(
        complement_rank=comp.lattice.rank,
        complement_inertia=comp.lattice.inertia(),
        root_count=len(roots),
        component_types=tuple(labels),
        type_string=root_type(ordered),
        total_component_rank=sum(c.rank for c in comps),
    )


# ---------------------------------------------------------------------------
# the uniqueness search for half-line classes
# ---------------------------------------------------------------------------

def component_breakdown(ls: LabeledSum, v: DualVector) -> dict[str, list[str]]:
    """Summand-by-summand coordinates of a dual vector, fraction strings."""
    out = {}
    for s in ls.summands:
        comp = ls.component(v, s)
        out[f"{s.name}-component"] = [str(c) for c in comp.coords]
    return out


@dataclass(frozen=True)
class HalflineSearchResult:
    label: str
    candidates: tuple[DualVector, ...]
    budget_checked: int
    component_candidate_counts: dict[str, int]

    def is_unique_expected(self, ls: LabeledSum) -> bool:
        expected = halfline_class(ls, self.label).vector
        return len(self.candidates) == 1 and self.candidates[0].coords == expected.coords

    def to_json_obj(self, ls: LabeledSum) -> dict:
        return {
            "label": f"F({self.label})",
            "unique_expected": self.is_unique_expected(ls),
            "assemblies_checked": self.budget_checked,
            "per_summand_candidates": dict(sorted(self.component_candidate_counts.items())),
            "candidates": [component_breakdown(ls, v) for v in self.candidates],
        }


def _summand_candidates(
    ls: LabeledSum,
    s: Summand,
    cls: DiscClass,
    budget: Fraction,
) -> list[tuple[Fraction, tuple[Fraction, ...]]]:
    """All dual vectors of one summand in a given class with norm >= budget and
    non-negative pairing against the summand's basis roots."""
    sub = ls.summand_lattice(s)
    search = bounded_class_minimizers(sub, cls, box=3)
    # anything outside the box is certified to sit strictly below the budget,
    # so the box scan is exhaustive for this summand
    if search.outside_bound >= budget:
        raise GlueError("candidate box cannot be certified against the budget")
    rep = search.rep
    scan, _ = _box_scan(sub, rep, 3, None)
    out = []
    for norm, x, pos_ok in scan:
        if pos_ok and norm >= budget:
            out.append((norm, (rep + sub.vector(x)).coords))
    out.sort(key=lambda t: (-t[0], t[1]))
    return out


def unique_halfline_search(
    ls: LabeledSum, lam: str, ns: OverlatticeResult
) -> HalflineSearchResult:
    """All overlattice classes of norm -2 meeting the polarization once,
    non-negative against every exceptional class, in the class of the
    half-line glue vector.

    The search fixes the polarization component, then walks the summands
    with the remaining norm budget of -5/2 threaded as a running bound.
    """
    target = halfline_class(ls, lam).vector
    grp = discriminant_group(ls.lattice)
    budget = Fraction(-5, 2)

    per_summand: list[tuple[Summand, list[tuple[Fraction, tuple[Fraction, ...]]]]] = []
    counts: dict[str, int] = {}
    for s in ls.summands:
        if s.kind == "H":
            continue
        sub = ls.summand_lattice(s)
        comp = ls.component(target, s)
        cls = discriminant_group(sub).class_of(comp)
        cands = _summand_candidates(ls, s, cls, budget)
        per_summand.append((s, cands))
        counts[s.name] = len(cands)

    # D4 components first, then A1: mirrors the budget pruning order
    per_summand.sort(key=lambda t: (t[0].kind != "D4", t[0].offset))
    max_tail = [Fraction(0)] * (len(per_summand) + 1)
    for i in range(len(per_summand) - 1, -1, -1):
        best = per_summand[i][1][0][0] if per_summand[i][1] else Fraction(0)
        max_tail[i] = max_tail[i + 1] + best

    results: list[DualVector] = []
    checked = 0
    choice: list[tuple[Fraction, tuple[Fraction, ...]]] = []

    def walk(i: int, used: Fraction) -> None:
        nonlocal checked
        if used + max_tail[i] < budget:
            return
        if i == len(per_summand):
            checked += 1
            if used != budget:
                return
            v = h_vee(ls)
            for (s, _), (_, coords) in zip(per_summand, choice):
                v = v + ls.assemble({s.name: coords})
            if v.norm() != -2 or pairing(v, ls.lattice.basis_vector(0)) != 1:
                raise GlueError("assembled candidate violates the norm or degree condition")
            if any(pairing(v, e) < 0 for e in ls.exceptional_basis_vectors()):
                return
            if grp.class_of(v) != grp.class_of(target):
                raise GlueError("assembled candidate left the glue class")
            if ns.to_result_coords(v) is None:
                raise GlueError("assembled candidate is not in the overlattice")
            results.append(v)
            return
        for norm, coords in per_summand[i][1]:
            if used + norm + max_tail[i + 1] < budget:
                break
            choice.append((norm, coords))
            walk(i + 1, used + norm)
            choice.pop()

    walk(0, Fraction(0))
    results.sort(key=lambda v: v.coords)
    return HalflineSearchResult(
        label=lam,
        candidates=tuple(results),
        budget_checked=checked,
        component_candidate_counts=counts,
    )
