"""Recognition of the one-parameter normal form from a nine-point double plane.

Given a sextic whose double plane carries the 4 D4 + 5 A1 configuration
with its five splitting lines, a projective frame is chosen sending three
of the A1 points and two of the D4 points to reference positions.  In
those coordinates the coefficient constraints forced by the splitting
lines collapse the sextic to

    x*y*z*(t^2*y*z^2 + x*z^2 + y^3 + x^3)

up to added squares and a global square rescaling of the cover
coordinate, and the parameter t is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import BinaryField
from .poly import HomPoly
from .surfaces import (
    Line,
    Point,
    analyze_singularities,
    intersect_lines,
    normalize_point,
    point_on_line,
    scan_splitting_lines,
)


class RecognitionError(ValueError):
    pass


def normal_form_sextic(field: BinaryField, t: int) -> HomPoly:
    """x*y*z*(t^2*y*z^2 + x*z^2 + y^3 + x^3) for a nonzero parameter t."""
    if t == 0:
        raise RecognitionError("parameter must be nonzero")
    return HomPoly(
        field,
        6,
        {
            (1, 2, 3): field.sqr(t),
            (2, 1, 3): 1,
            (1, 4, 1): 1,
            (4, 1, 1): 1,
        },
    )


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------

def _mat_mul(field: BinaryField, a, b):
    return tuple(
        tuple(
            field.mul(a[i][0], b[0][j]) ^ field.mul(a[i][1], b[1][j]) ^ field.mul(a[i][2], b[2][j])
            for j in range(3)
        )
        for i in range(3)
    )


def _mat_vec(field: BinaryField, a, v):
    return tuple(
        field.mul(a[i][0], v[0]) ^ field.mul(a[i][1], v[1]) ^ field.mul(a[i][2], v[2])
        for i in range(3)
    )


def _mat_inv(field: BinaryField, a):
    m = field.mul
    cof = [
        [
            m(a[(i + 1) % 3][(j + 1) % 3], a[(i + 2) % 3][(j + 2) % 3])
            ^ m(a[(i + 1) % 3][(j + 2) % 3], a[(i + 2) % 3][(j + 1) % 3])
            for i in range(3)
        ]
        for j in range(3)
    ]
    det = m(a[0][0], cof[0][0]) ^ m(a[1][0], cof[0][1]) ^ m(a[2][0], cof[0][2])
    if det == 0:
        raise RecognitionError("singular projective transformation")
    dinv = field.inv(det)
    return tuple(tuple(m(dinv, cof[i][j]) for j in range(3)) for i in range(3))


def normalize_frame(
    field: BinaryField,
    q_inf: Point,
    q_one: Point,
    q_zero: Point,
    p_00: Point,
    p_10: Point,
):
    """The projective transformation pinning the five anchor points.

    q_zero, q_inf, p_00 go to the coordinate triangle [1:0:0], [0:1:0],
    [0:0:1]; the residual diagonal scaling is fixed by sending q_one to
    [1:1:0] and p_10 to [1:0:1].  Unique up to a global scalar.
    """
    a = tuple(tuple((q_zero, q_inf, p_00)[j][i] for j in range(3)) for i in range(3))
    t0 = _mat_inv(field, a)
    img_q1 = _mat_vec(field, t0, q_one)
    img_p10 = _mat_vec(field, t0, p_10)
    if img_q1[2] != 0 or img_q1[0] == 0 or img_q1[1] == 0:
        raise RecognitionError("the unit A1 anchor is not in general position on its line")
    if img_p10[1] != 0 or img_p10[0] == 0 or img_p10[2] == 0:
        raise RecognitionError("the unit D4 anchor is not in general position on its line")
    u0 = field.inv(img_q1[0])
    u1 = field.inv(img_q1[1])
    u2 = field.mul(field.inv(img_p10[2]), field.mul(img_p10[0], u0))
    scale = ((u0, 0, 0), (0, u1, 0), (0, 0, u2))
    frame = _mat_mul(field, scale, t0)
    for pt, target in (
        (q_zero, (1, 0, 0)),
        (q_inf, (0, 1, 0)),
        (p_00, (0, 0, 1)),
        (q_one, (1, 1, 0)),
        (p_10, (1, 0, 1)),
    ):
        if normalize_point(field, _mat_vec(field, frame, pt)) != target:
            raise RecognitionError("frame failed to pin an anchor point")
    return frame


def apply_frame(g: HomPoly, frame) -> HomPoly:
    """Transform the form so that its zero set maps by the frame: g'(Fx) = g(x)."""
    inv = _mat_inv(g.field, frame)
    return g.compose_linear(inv)


# ---------------------------------------------------------------------------
# deterministic labeling of a configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledConfiguration:
    points: dict[str, Point]
    lines: dict[str, Line]
    extra_lines: tuple[Line, ...]


def label_configuration(
    field: BinaryField,
    d4_points: list[Point],
    a1_points: list[Point],
    splitting: list[Line],
) -> LabeledConfiguration:
    """Assign the standard labels to a nine-point five-line configuration.

    Ties (which A1 anchor plays the unit role, which line through an anchor
    comes first) are broken by coordinate order, so an already-normalized
    configuration receives the identity labeling.  A sixth splitting line
    joining two D4 points is set aside as extra.
    """
    if len(d4_points) != 4 or len(a1_points) != 5:
        raise RecognitionError("labeling needs 4 D4 and 5 A1 points")
    a1_line = None
    for l in splitting:
        if all(point_on_line(field, p, l) for p in a1_points):
            a1_line = l
            break
    if a1_line is None:
        raise RecognitionError("no splitting line carries all five A1 points")
    side = [l for l in splitting if l != a1_line]
    by_a1: dict[Point, list[Line]] = {p: [] for p in a1_points}
    for l in side:
        carriers = [p for p in a1_points if point_on_line(field, p, l)]
        if len(carriers) != 1:
            raise RecognitionError("a side line does not carry exactly one A1 point")
        by_a1[carriers[0]].append(l)
    doubles = sorted(p for p, ls in by_a1.items() if len(ls) == 2)
    # on the cube locus the two diagonals of the fork points also split and
    # meet in a third A1 point carrying two side lines; any two of the three
    # serve as anchors, so take the smallest pair
    if len(doubles) not in (2, 3):
        raise RecognitionError("expected two or three A1 points on two side lines each")
    q_inf, q_zero = doubles[0], doubles[1]
    extra = tuple(
        l for p, ls in by_a1.items() if p not in (q_inf, q_zero) for l in ls
    )
    l0, l1 = sorted(by_a1[q_inf])
    m0, m1 = sorted(by_a1[q_zero])
    p00 = intersect_lines(field, l0, m0)
    p01 = intersect_lines(field, l0, m1)
    p10 = intersect_lines(field, l1, m0)
    p11 = intersect_lines(field, l1, m1)
    if {p00, p01, p10, p11} != set(d4_points):
        raise RecognitionError("side-line intersections do not match the D4 points")
    q_rest = sorted(p for p in a1_points if p not in (q_inf, q_zero))
    q_one = q_rest[0]
    points = {
        "q(inf)": q_inf,
        "q(0)": q_zero,
        "q(1)": q_one,
        "q(w)": q_rest[1],
        "q(wb)": q_rest[2],
        "p(00)": p00,
        "p(01)": p01,
        "p(10)": p10,
        "p(11)": p11,
    }
    lines = {"L(inf)": a1_line, "L(0*)": l0, "L(1*)": l1, "L(*0)": m0, "L(*1)": m1}
    return LabeledConfiguration(points=points, lines=lines, extra_lines=extra)


# ---------------------------------------------------------------------------
# normal-form extraction
# ---------------------------------------------------------------------------

def _square_reduce(g: HomPoly) -> HomPoly:
    """Drop monomials with all exponents even; they absorb into the cover coordinate."""
    return HomPoly(
        g.field,
        g.degree,
        {e: c for e, c in g.terms.items() if e[0] % 2 or e[1] % 2 or e[2] % 2},
    )


def recognize_normal_form(g: HomPoly, frame) -> int:
    """Parameter t of the normal form after moving g through the frame.

    Asserts the full vanishing and relation pattern forced by the five
    splitting lines; a violation means the input is not of the nine-point,
    five-splitting-line shape.
    """
    f = g.field
    h = _square_reduce(apply_frame(g, frame))

    def co(l, m, n):
        return h.coeff((l, m, n))

    # the three coordinate lines split, so the sextic is divisible by xyz
    for e in h.terms:
        if 0 in e:
            raise RecognitionError(f"pattern violation: monomial {e} survives the line constraints")
    a = co(1, 4, 1)
    b = co(2, 3, 1)
    cc = co(3, 2, 1)
    d = co(4, 1, 1)
    if a == 0:
        raise RecognitionError("pattern violation: leading cubic coefficient vanishes")
    if co(1, 3, 2) or co(1, 1, 4) or co(3, 1, 2):
        raise RecognitionError("pattern violation: transversality constraints fail")
    if co(2, 1, 3) != d:
        raise RecognitionError("pattern violation: the two fork-line relations disagree")
    if a ^ b ^ cc ^ d:
        raise RecognitionError("pattern violation: the unit-point relation fails")
    if b != 0 or cc != 0:
        raise RecognitionError("pattern violation: the diagonal splitting lines force b = c = 0")
    if a != d:
        raise RecognitionError("pattern violation: outer coefficients differ")
    t2 = f.div(co(1, 2, 3), a)
    t = f.sqrt(t2)
    if t == 0:
        raise RecognitionError("degenerate parameter t = 0")
    expected = normal_form_sextic(f, t).scale(a)
    if h != expected:
        raise RecognitionError("reduced sextic is not the scaled normal form")
    return t


@dataclass(frozen=True)
class RecognitionResult:
    t: int
    config: LabeledConfiguration
    frame: tuple
    t_from_points: int


def recognize_surface(g: HomPoly, line_scan: str = "singular") -> RecognitionResult:
    """Full pipeline: singular points, labeling, frame, normal-form parameter.

    The parameter read from the coefficient relations must agree with the
    one read from the position of the fifth anchor point.
    """
    f = g.field
    report = analyze_singularities(g)
    d4 = report.of_type("D4")
    a1 = report.of_type("A1")
    if len(d4) != 4 or len(a1) != 5 or len(report.points) != 9:
        raise RecognitionError("surface does not carry the nine-point configuration")
    scan = scan_splitting_lines(g, mode=line_scan, points=[p for p, _ in report.points])
    config = label_configuration(f, d4, a1, [l for l, _ in scan])
    pts = config.points
    frame = normalize_frame(
        f, pts["q(inf)"], pts["q(1)"], pts["q(0)"], pts["p(00)"], pts["p(10)"]
    )
    img01 = normalize_point(f, _mat_vec(f, frame, pts["p(01)"]))
    if img01[0] != 0 or img01[2] != 1 or img01[1] == 0:
        raise RecognitionError("the fifth anchor did not land on the reference line")
    t_points = img01[1]
    img11 = normalize_point(f, _mat_vec(f, frame, pts["p(11)"]))
    if img11 != (1, t_points, 1):
        raise RecognitionError("the opposite D4 point is not at the expected position")
    t = recognize_normal_form(g, frame)
    if t != t_points:
        raise RecognitionError("coefficient parameter disagrees with the anchor position")
    return RecognitionResult(t=t, config=config, frame=frame, t_from_points=t_points)
