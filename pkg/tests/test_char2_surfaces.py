import pytest

from k3lat.char2_surfaces.field import BinaryField
from k3lat.char2_surfaces.poly import HomPoly
from k3lat.char2_surfaces.surfaces import (
    SurfaceError,
    all_points,
    analyze_singularities,
    classify_singularity,
    is_splitting,
    line_poly,
    line_through,
    nonreduced_splitting_lines_separable,
    restrict_to_line,
    scan_splitting_lines,
    schroeer_sextic,
    singular_points,
    table_lines,
    table_points,
    verify_configuration,
)


@pytest.fixture(scope="module")
def gf16():
    return BinaryField(4)


@pytest.fixture(scope="module")
def gf256():
    return BinaryField(8)


def test_schroeer_coefficients(gf16):
    f = gf16
    r, s = 3, 7
    g = schroeer_sextic(f, r, s)
    assert g.coeff((1, 4, 1)) == 1
    assert g.coeff((4, 1, 1)) == 1
    assert g.coeff((1, 2, 3)) == f.sqr(s)
    assert g.coeff((2, 1, 3)) == f.sqr(r)
    assert g.degree == 6


def test_schroeer_degenerate_parameters_still_build(gf16):
    g = schroeer_sextic(gf16, 0, 0)
    assert g.terms == {(1, 4, 1): 1, (4, 1, 1): 1}


def test_even_exponent_partial_dies(gf16):
    g = HomPoly(gf16, 6, {(6, 0, 0): 1, (1, 5, 0): 1})
    assert g.partial(0).terms == {(0, 5, 0): 1}


def test_singular_points_match_table(gf16):
    f = gf16
    r, s = 1, f.generator  # s outside GF(4) inside GF(16)
    g = schroeer_sextic(f, r, s)
    pts = singular_points(g)
    assert len(pts) == 9
    assert set(pts) == set(table_points(f, r, s).values())


def test_singular_points_match_slow_oracle(gf16):
    # independent path: evaluate the three partials with the generic
    # polynomial evaluator at every projective point
    f = gf16
    generic = HomPoly(
        f, 6, {(5, 1, 0): 1, (1, 5, 0): 1, (0, 1, 5): 3, (2, 3, 1): 7, (1, 1, 4): 9}
    )
    for g in (schroeer_sextic(f, 2, f.generator), generic):
        parts = [g.partial(v) for v in range(3)]
        slow = [p for p in all_points(f) if all(q.evaluate(p) == 0 for q in parts)]
        assert sorted(singular_points(g)) == sorted(slow)


def test_singular_points_infinite_locus_detected(gf16):
    square = HomPoly(gf16, 6, {(2, 2, 2): 1, (6, 0, 0): 1})
    with pytest.raises(SurfaceError):
        singular_points(square)


def test_classification_local_models(gf16):
    f = gf16
    # w^2 = x*y + x^3*y^3 at the origin of the z = 1 chart
    node = HomPoly(f, 6, {(1, 1, 4): 1, (3, 3, 0): 1})
    assert classify_singularity(node, (0, 0, 1)) == "A1"
    # w^2 = x^2*y + x*y^2: three distinct cubic roots
    fork = HomPoly(f, 6, {(2, 1, 3): 1, (1, 2, 3): 1})
    assert classify_singularity(fork, (0, 0, 1)) == "D4"
    # smooth point: linear term survives
    smooth = HomPoly(f, 6, {(1, 0, 5): 1})
    with pytest.raises(SurfaceError):
        classify_singularity(smooth, (0, 0, 1))
    # repeated cubic root: not a fork point
    worse = HomPoly(f, 6, {(2, 1, 3): 1})
    assert classify_singularity(worse, (0, 0, 1)) == "Other"


def test_classification_of_family_points(gf16):
    f = gf16
    r, s = 1, f.generator
    g = schroeer_sextic(f, r, s)
    named = table_points(f, r, s)
    for label, p in named.items():
        expected = "D4" if label.startswith("p") else "A1"
        assert classify_singularity(g, p) == expected
    report = analyze_singularities(g)
    assert report.total_milnor == 21


def test_five_standard_lines_split_with_certificates(gf16):
    f = gf16
    r, s = 1, f.generator
    g = schroeer_sextic(f, r, s)
    for name, l in table_lines(f, r, s).items():
        cert = is_splitting(g, line_poly(f, l))
        assert cert is not None, name
        assert cert.verify(g)


def test_fork_line_certificate_shape(gf16):
    f = gf16
    r, s = 3, 7
    g = schroeer_sextic(f, r, s)
    # certificate from the displayed parametrization: gamma = sqrt(r) x1 x2 (x1 + s x2)
    sqrt_r = f.sqrt(r)
    gamma = HomPoly(
        f, 3, {(0, 2, 1): sqrt_r, (0, 1, 2): f.mul(sqrt_r, s)}
    )
    ell = line_poly(f, (1, 0, r))
    quintic = (g + gamma.square()).divide_by_linear(ell)
    assert (ell * quintic) + gamma.square() == g
    # the canonical certificate differs but also verifies
    cert = is_splitting(g, ell)
    assert cert is not None and cert.verify(g)


def test_diagonal_line_does_not_split(gf16):
    f = gf16
    s = f.generator
    g = schroeer_sextic(f, 1, s)
    assert is_splitting(g, line_poly(f, (1, 1, 0))) is None


def test_full_configuration_gf16(gf16):
    f = gf16
    r, s = 1, f.generator
    conf = verify_configuration(schroeer_sextic(f, r, s), r=r, s=s, line_scan="full")
    assert conf.ok, conf.findings
    assert conf.total_milnor == 21
    assert len(conf.splitting_lines) == 5
    assert set(conf.splitting_lines) == set(table_lines(f, r, s).values())
    for line, cert in conf.certificates:
        assert cert.verify(schroeer_sextic(f, r, s))


def test_configuration_singular_scan_agrees(gf16):
    f = gf16
    r, s = 1, f.generator
    g = schroeer_sextic(f, r, s)
    full = verify_configuration(g, r=r, s=s, line_scan="full")
    fast = verify_configuration(g, r=r, s=s, line_scan="singular")
    assert full.splitting_lines == fast.splitting_lines
    assert fast.ok


def test_full_scan_gf256_finds_exactly_five_lines():
    f = BinaryField(8)
    r, s = 1, f.generator
    conf = verify_configuration(schroeer_sextic(f, r, s), r=r, s=s, line_scan="full")
    assert conf.ok, conf.findings
    assert len(conf.splitting_lines) == 5
    assert set(conf.splitting_lines) == set(table_lines(f, r, s).values())


def test_extra_line_when_cubes_match(gf16):
    f = gf16
    w = f.omega()
    r = 2
    s = f.mul(w, r)  # r^3 = s^3 with r != s
    g = schroeer_sextic(f, r, s)
    m = line_through(f, (0, 0, 1), (r, s, 1))
    cert = is_splitting(g, line_poly(f, m))
    assert cert is not None and cert.verify(g)
    conf = verify_configuration(g, r=r, s=s, line_scan="full")
    # the five standard lines plus both diagonals of the fork points
    assert len(conf.splitting_lines) == 7
    assert m in conf.splitting_lines
    m2 = line_through(f, (0, s, 1), (r, 0, 1))
    assert m2 in conf.splitting_lines
    # the A1 point q(c) with s = c*r sits on the first diagonal
    from k3lat.char2_surfaces.surfaces import normalize_point, point_on_line

    qc = normalize_point(f, (1, w, 0))
    assert qc in [p for p, t in conf.report.points if t == "A1"]
    assert point_on_line(f, qc, m)


def test_dichotomy_sampled_pairs(gf16):
    f = gf16
    cases = [(1, 2), (3, 5), (2, f.mul(f.omega(), 2)), (4, 4), (7, f.mul(f.sqr(f.omega()), 7))]
    for r, s in cases:
        g = schroeer_sextic(f, r, s)
        m = line_through(f, (0, 0, 1), (r, s, 1))
        splits = is_splitting(g, line_poly(f, m)) is not None
        assert splits == (f.pow(r, 3) == f.pow(s, 3))


def test_dichotomy_sampled_gf256():
    import random

    f = BinaryField(8)
    w = f.omega()
    rng = random.Random(6)
    for _ in range(10):
        r = rng.randrange(1, f.q)
        s = rng.randrange(1, f.q)
        for rr, ss in ((r, s), (r, f.mul(w, r))):
            g = schroeer_sextic(f, rr, ss)
            m = line_through(f, (0, 0, 1), (rr, ss, 1))
            splits = is_splitting(g, line_poly(f, m)) is not None
            assert splits == (f.pow(rr, 3) == f.pow(ss, 3))


def test_splitting_agrees_with_square_test_random(gf16):
    # the certificate path (division plus verification) and the bare
    # square test of the restriction must agree
    import random

    f = gf16
    rng = random.Random(31)
    checked = split_count = 0
    while checked < 100:
        terms = {}
        for l in range(7):
            for m in range(7 - l):
                if rng.random() < 0.25:
                    terms[(l, m, 6 - l - m)] = rng.randrange(f.q)
        g = HomPoly(f, 6, terms)
        ell_coeffs = [rng.randrange(f.q) for _ in range(3)]
        if not any(ell_coeffs):
            continue
        # make half the draws splitting by construction
        if checked % 2 == 0:
            ell = HomPoly.linear(f, ell_coeffs)
            quintic = HomPoly(
                f, 5, {(l, m, 5 - l - m): rng.randrange(f.q) for l in range(6) for m in range(6 - l)}
            )
            cubic = HomPoly(f, 3, {(1, 1, 1): rng.randrange(f.q), (3, 0, 0): rng.randrange(f.q)})
            g = (ell * quintic) + cubic.square()
        ell = HomPoly.linear(f, ell_coeffs)
        cert = is_splitting(g, ell)
        square = restrict_to_line(g, ell).is_square()
        assert (cert is not None) == (square is not None)
        if cert is not None:
            assert cert.verify(g)
            split_count += 1
        checked += 1
    assert split_count >= 50


def test_quintic_transversality_matches_classification(gf16):
    # points on a splitting line are nodes exactly when the certificate
    # quintic meets the line simply there
    f = gf16
    r, s = 1, f.generator
    g = schroeer_sextic(f, r, s)
    singular = set(singular_points(g))
    for name, l in table_lines(f, r, s).items():
        ell = line_poly(f, l)
        cert = is_splitting(g, ell)
        restricted_quintic = restrict_to_line(cert.quintic, ell)
        elim = max(v for v in range(3) if ell.coeff(tuple(1 if i == v else 0 for i in range(3))))
        kept = tuple(v for v in range(3) if v != elim)
        for p in all_points(f):
            from k3lat.char2_surfaces.surfaces import point_on_line

            if not point_on_line(f, p, l):
                continue
            u, v = p[kept[0]], p[kept[1]]
            mult = (
                restricted_quintic.multiplicity_at(u, v)
                if not restricted_quintic.is_zero()
                else None
            )
            if mult == 0:
                assert p not in singular
            elif mult == 1:
                assert p in singular and classify_singularity(g, p) == "A1"
            else:
                assert p in singular


def test_lemma_bound_three_coordinate_lines(gf16):
    f = gf16
    c = HomPoly(f, 3, {(1, 1, 1): 1})  # x*y*z
    g = HomPoly(f, 6, {(2, 2, 2): 1})  # restricts to a square everywhere
    lines = nonreduced_splitting_lines_separable(c, g)
    assert lines == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_lemma_bound_single_line(gf16):
    f = gf16
    # z * (irreducible quadratic): only z = 0 divides the cubic
    c0 = next(
        c
        for c in range(1, f.q)
        if all(f.sqr(u) ^ u ^ c for u in range(f.q))
    )
    quad = HomPoly(f, 2, {(2, 0, 0): 1, (1, 1, 0): 1, (0, 2, 0): c0})
    assert all(
        quad.evaluate((u, v, 0)) != 0
        for u, v in [(1, 0)] + [(u, 1) for u in range(f.q)]
    )
    c = HomPoly.monomial(f, (0, 0, 1)) * quad
    g = HomPoly(f, 6, {(5, 0, 1): 1, (0, 6, 0): 1})  # restriction to z = 0 is y^6
    lines = nonreduced_splitting_lines_separable(c, g)
    assert lines == [(0, 0, 1)]


def test_lemma_bound_rejects_bad_degrees(gf16):
    with pytest.raises(SurfaceError):
        nonreduced_splitting_lines_separable(HomPoly.zero(gf16, 3), HomPoly.zero(gf16, 6))
    with pytest.raises(SurfaceError):
        nonreduced_splitting_lines_separable(
            HomPoly.monomial(gf16, (1, 1, 0)), HomPoly.zero(gf16, 6)
        )
