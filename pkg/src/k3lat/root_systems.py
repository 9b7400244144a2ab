"""Roots of even negative-definite lattices.

Enumeration of norm -2 vectors by exact lattice-point search, irreducible
decomposition, positive and indecomposable roots with respect to a
positivity functional, Dynkin-diagram classification, and the bounded
dual-class norm searches used by the glue-vector uniqueness arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact_arith import IntMatrix, hnf_rows, invert_rational, RatMatrix
from .lattice_core import (
    DiscClass,
    DualVector,
    Lattice,
    discriminant_group,
    is_even,
    lattice_A1,
    lattice_D4,
    pairing,
)


class RootSystemError(ValueError):
    pass


def _floor_sqrt(f: Fraction) -> int:
    """Largest integer m >= 0 with m*m <= f (f >= 0)."""
    if f < 0:
        raise RootSystemError("negative radicand")
    return math.isqrt(f.numerator * f.denominator) // f.denominator


def _cholesky(q: list[list[Fraction]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Q = R^T diag(d) R with R unit upper triangular; requires Q positive definite."""
    n = len(q)
    q = [row[:] for row in q]
    d = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = q[i][i]
        if d[i] <= 0:
            raise RootSystemError("form is not positive definite")
        for j in range(i + 1, n):
            r[i][j] = q[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= d[i] * r[i][k] * r[i][l]
                q[l][k] = q[k][l]
    return d, r


def short_vectors(gram: IntMatrix, bound: int) -> list[tuple[int, ...]]:
    """All nonzero integer vectors with x^T (-gram) x <= bound, gram negative definite.

    Exact recursive enumeration driven by the rational Cholesky decomposition;
    no floating point is involved anywhere.
    """
    n = gram.rows
    q = [[Fraction(-gram.entries[i][j]) for j in range(n)] for i in range(n)]
    d, r = _cholesky(q)
    out: list[tuple[int, ...]] = []
    x = [0] * n
    budget = Fraction(bound)

    def recurse(i: int, remaining: Fraction) -> None:
        if i < 0:
            if any(x):
                out.append(tuple(x))
            return
        center = sum((r[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        m = _floor_sqrt(remaining / d[i])
        lo = math.ceil(-center) - m - 1
        hi = math.floor(-center) + m + 1
        for xi in range(lo, hi + 1):
            term = d[i] * (xi + center) ** 2
            if term <= remaining:
                x[i] = xi
                recurse(i - 1, remaining - term)
        x[i] = 0

    recurse(n - 1, budget)
    return sorted(out)


@dataclass(frozen=True)
class RootSet:
    lattice: Lattice
    roots: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.roots)

    def to_json_obj(self) -> dict:
        return {"rank": self.lattice.rank, "roots": [list(r) for r in self.roots]}


def enumerate_roots(lattice: Lattice) -> RootSet:
    """The complete set of lattice vectors of norm -2."""
    if not is_even(lattice):
        raise RootSystemError("root enumeration requires an even lattice")
    if not lattice.is_negative_definite():
        raise RootSystemError("root enumeration requires a negative-definite lattice")
    gram = lattice.gram
    roots = [
        v
        for v in short_vectors(gram, 2)
        if sum(v[i] * gram.entries[i][j] * v[j] for i in range(len(v)) for j in range(len(v))) == -2
    ]
    rs = RootSet(lattice, tuple(sorted(roots)))
    rset = set(rs.roots)
    for v in rs.roots:
        if tuple(-c for c in v) not in rset:
            raise RootSystemError("root set is not closed under negation")
    return rs


# ---------------------------------------------------------------------------
# irreducible decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootComponent:
    """A connected class of roots together with the sublattice they generate."""

    lattice: Lattice
    roots: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]
    gram: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.basis)

    def to_json_obj(self, label: str | None = None) -> dict:
        obj = {
            "rank": self.rank,
            "size": len(self.roots),
            "roots": [list(r) for r in self.roots],
        }
        if label is not None:
            obj["type"] = label
        return obj


def _pair_int(gram: IntMatrix, u: Sequence[int], v: Sequence[int]) -> int:
    gv = gram.mul_vec(v)
    return sum(a * b for a, b in zip(u, gv))


def irreducible_decomposition(root_set: RootSet) -> list[RootComponent]:
    """Connected components of the graph on roots with edges where the pairing is nonzero."""
    gram = root_set.lattice.gram
    roots = list(root_set.roots)
    index = {v: i for i, v in enumerate(roots)}
    seen = [False] * len(roots)
    comps = []
    for start in range(len(roots)):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            i = stack.pop()
            members.append(roots[i])
            for j in range(len(roots)):
                if not seen[j] and _pair_int(gram, roots[i], roots[j]) != 0:
                    seen[j] = True
                    stack.append(j)
        members.sort()
        basis = hnf_rows(IntMatrix(members))
        b = IntMatrix(basis)
        sub_gram = b.mul(gram).mul(b.transpose())
        comps.append(RootComponent(root_set.lattice, tuple(members), tuple(basis), sub_gram))
    comps.sort(key=lambda c: c.roots[0])
    return comps


# ---------------------------------------------------------------------------
# positivity functionals, indecomposable roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityFunctional:
    """Linear form alpha(x) = coeffs * Gram * x, i.e. pairing against a fixed dual vector."""

    lattice: Lattice
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def from_dual_vector(v: DualVector) -> "PositivityFunctional":
        return PositivityFunctional(v.lattice, v.coords)

    def value(self, x: Sequence[int]) -> Fraction:
        gx = self.lattice.gram_rat().mul_vec([Fraction(c) for c in x])
        return sum((a * b for a, b in zip(self.coeffs, gx)), Fraction(0))


def positive_part(component: RootComponent, alpha: PositivityFunctional) -> list[tuple[int, ...]]:
    out = []
    for r in component.roots:
        v = alpha.value(r)
        if v == 0:
            raise RootSystemError("positivity functional vanishes on a root")
        if v > 0:
            out.append(r)
    return out


def positive_indecomposables(
    component: RootComponent, alpha: PositivityFunctional
) -> list[tuple[int, ...]]:
    """Roots of the positive part that are not sums of two positive roots."""
    plus = positive_part(component, alpha)
    plus_set = set(plus)
    out = []
    for r in plus:
        decomposable = any(
            tuple(a - b for a, b in zip(r, r1)) in plus_set for r1 in plus
        )
        if not decomposable:
            out.append(r)
    out.sort()
    if len(out) != component.rank:
        raise RootSystemError("indecomposable count differs from the component rank")
    return out


def decompose_root(
    component: RootComponent,
    alpha: PositivityFunctional,
    root: Sequence[int],
) -> tuple[int, ...]:
    """The unique non-negative integer expression of a positive root in the indecomposables."""
    root = tuple(root)
    if alpha.value(root) <= 0:
        raise RootSystemError("root is not in the positive part")
    eps = positive_indecomposables(component, alpha)
    gram = component.lattice.gram
    m = RatMatrix([[Fraction(_pair_int(gram, a, b)) for b in eps] for a in eps])
    rhs = [Fraction(_pair_int(gram, a, root)) for a in eps]
    coeffs = invert_rational(m).mul_vec(rhs)
    if any(c.denominator != 1 or c < 0 for c in coeffs):
        raise RootSystemError("root does not decompose with non-negative integers")
    rebuilt = [0] * len(root)
    for c, e in zip(coeffs, eps):
        for i, ei in enumerate(e):
            rebuilt[i] += int(c) * ei
    if tuple(rebuilt) != root:
        raise RootSystemError("root lies outside the span of the indecomposables")
    return tuple(int(c) for c in coeffs)


# ---------------------------------------------------------------------------
# ADE classification
# ---------------------------------------------------------------------------

def cartan_matrix(label: str) -> IntMatrix:
    """Cartan matrix in the canonical node order used by ade_type.

    A_n: a chain 1-2-...-n.  D_n: the two short leaves first, then the
    center, then the long chain outward.  E_n: short leaf, middle-branch
    inner node, middle-branch leaf, center, long chain outward.
    """
    family, n = label[0], int(label[1:])
    edges: list[tuple[int, int]] = []
    if family == "A":
        edges = [(i, i + 1) for i in range(1, n)]
    elif family == "D":
        if n < 4:
            raise RootSystemError("D type needs rank >= 4")
        edges = [(1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n)]
    elif family == "E":
        if n not in (6, 7, 8):
            raise RootSystemError("E type needs rank 6, 7 or 8")
        edges = [(1, 4), (2, 4), (2, 3)] + [(i, i + 1) for i in range(4, n)]
    else:
        raise RootSystemError(f"unknown type {label!r}")
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 2
    for i, j in edges:
        m[i - 1][j - 1] = -1
        m[j - 1][i - 1] = -1
    return IntMatrix(m)


def _diagram_order(
    nodes: list[tuple[int, ...]], adj: dict[tuple[int, ...], list[tuple[int, ...]]]
) -> tuple[str, list[tuple[int, ...]]]:
    """Classify a Dynkin diagram and return the canonical node order."""
    n = len(nodes)
    edge_count = sum(len(v) for v in adj.values()) // 2
    if edge_count != n - 1:
        raise RootSystemError("diagram is not a tree; not an ADE diagram")
    degs = {v: len(adj[v]) for v in nodes}
    if any(d > 3 for d in degs.values()):
        raise RootSystemError("diagram has a node of degree > 3; not an ADE diagram")
    forks = [v for v in nodes if degs[v] == 3]
    if len(forks) > 1:
        raise RootSystemError("diagram has two fork nodes; not an ADE diagram")

    def walk(frm, nxt):
        # nodes of the branch starting at nxt, walking away from frm
        branch = [nxt]
        prev, cur = frm, nxt
        while True:
            ahead = [w for w in adj[cur] if w != prev]
            if not ahead:
                return branch
            if len(ahead) > 1:
                raise RootSystemError("branch re-forks; not an ADE diagram")
            prev, cur = cur, ahead[0]
            branch.append(cur)

    if not forks:
        if n == 1:
            return "A1", nodes[:]
        ends = sorted(v for v in nodes if degs[v] == 1)
        order = walk(None, ends[0])
        return f"A{n}", order
    center = forks[0]
    branches = sorted((walk(center, w) for w in adj[center]), key=lambda b: (len(b), b[0]))
    lens = [len(b) for b in branches]
    if lens[0] == 1 and lens[1] == 1:
        label = f"D{n}"
        order = [branches[0][0], branches[1][0], center] + branches[2][:]
    elif lens[0] == 1 and lens[1] == 2 and lens[2] in (2, 3, 4):
        label = f"E{n}"
        order = [branches[0][0], branches[1][0], branches[1][1], center] + branches[2][:]
    else:
        raise RootSystemError("branch profile is not of ADE shape")
    return label, order


def ade_type(component: RootComponent, alpha: PositivityFunctional) -> str:
    """Dynkin type of a root component, certified against the Cartan matrix.

    The indecomposables are ordered canonically and their Gram matrix is
    checked to equal minus the Cartan matrix of the reported type.
    """
    eps = positive_indecomposables(component, alpha)
    gram = component.lattice.gram
    adj: dict[tuple[int, ...], list[tuple[int, ...]]] = {e: [] for e in eps}
    for i, a in enumerate(eps):
        for b in eps[i + 1 :]:
            p = _pair_int(gram, a, b)
            if p not in (0, 1):
                raise RootSystemError("indecomposable pairing outside {0,1}; not an ADE diagram")
            if p == 1:
                adj[a].append(b)
                adj[b].append(a)
    label, order = _diagram_order(eps, adj)
    cartan = cartan_matrix(label)
    actual = [[-_pair_int(gram, a, b) for b in order] for a in order]
    if actual != [list(r) for r in cartan.entries]:
        raise RootSystemError("Gram of the indecomposables does not match the Cartan matrix")
    return label


def root_type(components: Iterable[tuple[str, int]]) -> str:
    """Formal-sum notation such as '4D4+5A1' from (label, count) pairs."""
    parts = []
    for label, count in components:
        parts.append(label if count == 1 else f"{count}{label}")
    return "+".join(parts)


# ---------------------------------------------------------------------------
# bounded dual-class norm searches on A1 and D4
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassNormSearch:
    """Outcome of the exhaustive box search over one dual class.

    ``outside_bound`` is a certified upper bound on the norm of any class
    representative outside the box that satisfies the positivity
    constraints, so the reported maximum (and runner-up threshold) is
    global, not merely in-box.
    """

    lattice: Lattice
    rep: DualVector
    box: int
    max_norm: Fraction
    maximizers: tuple[DualVector, ...]
    runner_up: Fraction | None
    outside_bound: Fraction
    norms_all_odd: bool


_D4_LEAVES = (0, 1, 3)  # basis positions of the three outer nodes; position 2 is the center


def _d4_leaf_forms(leaf: int) -> list[Callable[[Sequence[int]], int]]:
    others = [k for k in _D4_LEAVES if k != leaf]
    return [
        lambda x, j=leaf: 1 - 2 * x[j] + x[2],
        lambda x, k=others[0]: -2 * x[k] + x[2],
        lambda x, k=others[1]: -2 * x[k] + x[2],
        lambda x: x[2] - 1,
    ]


def _match_rep(lattice: Lattice, cls: DiscClass) -> tuple[str, DualVector, int | None]:
    """Pick the canonical representative of the class among the named dual vectors."""
    grp = discriminant_group(lattice)
    if cls.group.lattice != lattice:
        raise RootSystemError("class belongs to a different lattice")
    if lattice.gram.entries == lattice_A1().gram.entries:
        for name, rep in (("zero", lattice.zero()), ("a_dual", lattice.dual_basis_vector(0))):
            if grp.class_of(rep) == cls:
                return name, rep, None
    elif lattice.gram.entries == lattice_D4().gram.entries:
        named = [("zero", lattice.zero(), None)] + [
            (f"d{j + 1}_dual", lattice.dual_basis_vector(j), j) for j in _D4_LEAVES
        ]
        for name, rep, leaf in named:
            if grp.class_of(rep) == cls:
                return name, rep, leaf
    else:
        raise RootSystemError("bounded searches support only the A1 and D4 lattices")
    raise RootSystemError("class is not in the discriminant group")


def _box_scan(
    lattice: Lattice,
    rep: DualVector,
    box: int,
    forms,
) -> tuple[list[tuple[Fraction, tuple[int, ...], bool]], bool]:
    """Integer-arithmetic scan of rep + {|x_i| <= box}.

    Returns (norm, x, positivity_ok) triples where positivity is against the
    basis vectors, plus the all-norms-odd flag for leaf classes.  The leaf
    norm identity is re-derived at every point.
    """
    import itertools

    g = lattice.gram.entries
    n = lattice.rank
    grep_frac = rep.pair_with_basis()
    if any(c.denominator != 1 for c in grep_frac):
        raise RootSystemError("representative is not a dual vector")
    grep = [int(c) for c in grep_frac]
    rep_norm2 = 2 * rep.norm()
    if rep_norm2.denominator != 1:
        raise RootSystemError("representative norm is not half-integral")
    rep_norm2 = int(rep_norm2)
    all_odd = True
    out = []
    for x in itertools.product(range(-box, box + 1), repeat=n):
        gx = [sum(g[i][j] * x[j] for j in range(n)) for i in range(n)]
        quad = sum(x[i] * gx[i] for i in range(n))
        cross = sum(a * b for a, b in zip(grep, x))
        norm2 = rep_norm2 + 4 * cross + 2 * quad
        if forms is not None:
            s = sum(f(x) ** 2 for f in forms)
            if norm2 != -2 - (s - 2):
                raise RootSystemError("leaf-class norm identity failed")
            if norm2 % 4 != 2:
                all_odd = False
        pos_ok = all(a + b >= 0 for a, b in zip(grep, gx))
        out.append((Fraction(norm2, 2), x, pos_ok))
    return out, all_odd


def bounded_class_minimizers(
    lattice: Lattice,
    cls: DiscClass,
    positivity_roots: Sequence[DualVector] | None = None,
    box: int = 3,
) -> ClassNormSearch:
    """Maximum of v*v over dual vectors in a fixed class with v*root >= 0 constraints.

    The search runs over representative-plus-lattice translates with all
    coordinates bounded by ``box``; an exact case analysis certifies that
    any vector outside the box has norm at most ``outside_bound``.
    """
    if box < 3:
        raise RootSystemError("box radius below 3 has no sufficiency certificate")
    name, rep, leaf = _match_rep(lattice, cls)
    n = lattice.rank

    is_leaf_class = leaf is not None
    forms = _d4_leaf_forms(leaf) if is_leaf_class else None

    scan, all_odd = _box_scan(lattice, rep, box, forms)
    if positivity_roots is None:
        found = [(norm, x) for norm, x, pos_ok in scan if pos_ok]
    else:
        found = []
        for norm, x, _ in scan:
            v = rep + lattice.vector(x)
            if all(pairing(v, r) >= 0 for r in positivity_roots):
                found.append((norm, x))
    if not found:
        raise RootSystemError("empty constrained search")
    found.sort(key=lambda t: (-t[0], t[1]))
    max_norm = found[0][0]
    maximizers = tuple(rep + lattice.vector(x) for norm, x in found if norm == max_norm)
    rest = [norm for norm, _ in found if norm < max_norm]
    runner_up = max(rest) if rest else None

    b = box
    if lattice.rank == 1:
        e = rep.coords[0]
        outside = -2 * (Fraction(b + 1) - abs(e)) ** 2
    elif is_leaf_class:
        outside = max(
            -1 - Fraction(b * b - 2, 2),
            -1 - Fraction((b + 1) ** 2 - 2, 2),
            -1 - Fraction((b + 2) ** 2 - 2, 2),
        )
    else:
        # zero class on D4: 4*(-gram) - I is positive definite (checked
        # exactly), so -v*v > |x|^2/4 and escaping the box forces
        # v*v < -(box+1)^2/4
        four_q_minus_i = IntMatrix(
            [
                [
                    -4 * lattice.gram.entries[i][j] - (1 if i == j else 0)
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )
        from .exact_arith import inertia as _inertia

        if _inertia(four_q_minus_i)[0] != n:
            raise RootSystemError("spectral certificate for the zero class failed")
        outside = -Fraction((b + 1) ** 2, 4)
    if outside > max_norm:
        raise RootSystemError("sufficiency certificate does not cover the box")
    return ClassNormSearch(
        lattice=lattice,
        rep=rep,
        box=box,
        max_norm=max_norm,
        maximizers=maximizers,
        runner_up=runner_up,
        outside_bound=outside,
        norms_all_odd=all_odd and is_leaf_class,
    )
