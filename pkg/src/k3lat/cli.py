"""Batch verification driver.

Subcommands expose the lattice-side and surface-side check suites with
JSON or text reports.  Reports are deterministic for a fixed configuration
(the timing block is the only part that varies between runs); exit code 0
means every check passed, 1 means a check failed, 2 means a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import ns_glue
from .char2_surfaces import (
    BinaryField,
    HomPoly,
    recognize_surface,
    schroeer_sextic,
    verify_configuration,
)
from .char2_surfaces.surfaces import line_through, line_poly, is_splitting, table_points
from .lattice_core import discriminant_group, is_even, is_p_elementary, lattice_by_name
from .root_systems import bounded_class_minimizers
from .ns_glue import (
    EXTRA_GLUE_CHOICES,
    L_LABELS,
    OverlatticeSpec,
    artin_invariant,
    build_lambda,
    build_overlattice,
    exceptional_root_analysis,
    extra_glue_class,
    halfline_class,
    independence_check,
    unique_halfline_search,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("K3LAT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    cap = _thread_cap()
    items = list(items)
    if cap == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


class Checks:
    def __init__(self):
        self.results = []
        self.timing = {}

    def run(self, name: str, fn):
        start = time.perf_counter()
        try:
            passed, witness = fn()
        except Exception as exc:  # a raised contract error is a failed check
            passed, witness = False, {"error": str(exc)}
        self.timing[name] = round((time.perf_counter() - start) * 1000.0, 3)
        self.results.append({"name": name, "pass": bool(passed), "witness": witness})

    @property
    def all_passed(self) -> bool:
        return all(r["pass"] for r in self.results)


# ---------------------------------------------------------------------------
# lattice subcommand
# ---------------------------------------------------------------------------

def cmd_lattice(args) -> dict:
    checks = Checks()
    ls = build_lambda()

    def base_check():
        lat = ls.lattice
        witness = {
            "rank": lat.rank,
            "det": str(lat.det()),
            "inertia": list(lat.inertia()),
            "discriminant": [f for f in discriminant_group(lat).invariant_factors if f > 1],
        }
        ok = (
            lat.rank == 22
            and lat.det() == -(2**14)
            and lat.inertia() == (1, 21, 0)
            and witness["discriminant"] == [2] * 14
            and is_even(lat)
        )
        return ok, witness

    checks.run("base_lattice", base_check)

    glue = [halfline_class(ls, lam) for lam in L_LABELS]
    if args.inject_corrupt_glue:
        bad = glue[1].vector
        coords = list(bad.coords)
        coords[3] += Fraction(1, 2)
        glue[1] = ns_glue.GlueVector(glue[1].name, ls.lattice.vector(coords))

    def independence():
        for gv in glue:
            if not gv.vector.is_dual_vector():
                return False, {
                    "offender": gv.name,
                    "coords": [str(c) for c in gv.vector.coords],
                    "basis_pairings": [str(c) for c in gv.vector.pair_with_basis()],
                }
        ok, rank = independence_check(ls, glue)
        return ok and rank == 5, {"rank": rank}

    checks.run("glue_independence", independence)

    ns_holder = {}

    def overlattice():
        ns = build_overlattice(OverlatticeSpec(ls, tuple(glue)))
        ns_holder["ns"] = ns
        sigma = artin_invariant(ns.lattice, 2, ns_context=True)
        witness = {
            "rank": ns.lattice.rank,
            "index": ns.index,
            "det": str(ns.lattice.det()),
            "sigma": sigma,
            "even": is_even(ns.lattice),
            "two_elementary": is_p_elementary(ns.lattice, 2),
        }
        ok = (
            ns.index == 32
            and ns.lattice.det() == -16
            and sigma == 2
            and witness["even"]
            and witness["two_elementary"]
        )
        return ok, witness

    checks.run("overlattice_sigma2", overlattice)

    if args.with_extra_glue:
        def overlattice_extra():
            extra = extra_glue_class(ls, args.with_extra_glue)
            ns1 = build_overlattice(OverlatticeSpec(ls, tuple(glue) + (extra,)))
            sigma = artin_invariant(ns1.lattice, 2, ns_context=True)
            witness = {"index": ns1.index, "det": str(ns1.lattice.det()), "sigma": sigma}
            return ns1.index == 64 and ns1.lattice.det() == -4 and sigma == 1, witness

        checks.run("overlattice_sigma1", overlattice_extra)

    def root_type_check():
        ns = ns_holder.get("ns")
        if ns is None:
            return False, {"error": "overlattice unavailable"}
        report = exceptional_root_analysis(ns)
        witness = {
            "complement_rank": report.complement_rank,
            "complement_inertia": list(report.complement_inertia),
            "root_count": report.root_count,
            "type": report.type_string,
            "total_component_rank": report.total_component_rank,
        }
        ok = (
            report.type_string == "4D4+5A1"
            and report.total_component_rank == 21
            and report.complement_inertia == (0, 21, 0)
        )
        return ok, witness

    checks.run("exceptional_root_type", root_type_check)

    def class_searches():
        box = args.lemma_box
        a1 = lattice_by_name("A1")
        d4 = lattice_by_name("D4")
        ga = discriminant_group(a1)
        gd = discriminant_group(d4)
        out = {}
        s = bounded_class_minimizers(a1, ga.zero_class(), box=box)
        out["A1_zero"] = {"max": str(s.max_norm), "next": str(s.runner_up)}
        ok = s.max_norm == 0 and len(s.maximizers) == 1 and s.runner_up <= -2
        s = bounded_class_minimizers(a1, ga.class_of(a1.dual_basis_vector(0)), box=box)
        out["A1_dual"] = {"max": str(s.max_norm), "next": str(s.runner_up)}
        ok = ok and s.max_norm == Fraction(-1, 2) and len(s.maximizers) == 1
        ok = ok and s.runner_up <= Fraction(-9, 2)
        s = bounded_class_minimizers(d4, gd.zero_class(), box=box)
        out["D4_zero"] = {"max": str(s.max_norm), "next": str(s.runner_up)}
        ok = ok and s.max_norm == 0 and len(s.maximizers) == 1 and s.runner_up <= -2
        s = bounded_class_minimizers(d4, gd.class_of(d4.dual_basis_vector(0)), box=box)
        out["D4_dual"] = {
            "max": str(s.max_norm),
            "next": str(s.runner_up),
            "all_odd": s.norms_all_odd,
        }
        ok = ok and s.max_norm == -1 and len(s.maximizers) == 1
        ok = ok and s.runner_up <= -3 and s.norms_all_odd
        return ok, out

    checks.run("bounded_class_searches", class_searches)

    def uniqueness():
        ns = ns_holder.get("ns")
        if ns is None:
            return False, {"error": "overlattice unavailable"}
        witness = {}
        ok = True
        for res in _pmap(lambda lam: unique_halfline_search(ls, lam, ns), L_LABELS):
            witness[f"F({res.label})"] = res.to_json_obj(ls)
            ok = ok and res.is_unique_expected(ls)
        return ok, witness

    checks.run("halfline_uniqueness", uniqueness)
    return {"checks": checks.results, "timing_ms": checks.timing, "pass": checks.all_passed}


# ---------------------------------------------------------------------------
# surface subcommand
# ---------------------------------------------------------------------------

def _sample_pairs(field: BinaryField, count: int, seed: int, allow_cube: bool):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.randrange(1, field.q)
        s = rng.randrange(1, field.q)
        if not allow_cube and field.pow(r, 3) == field.pow(s, 3):
            continue
        out.append((r, s))
    return out


def _surface_case(field: BinaryField, r: int, s: int, line_scan: str) -> tuple[bool, dict]:
    g = schroeer_sextic(field, r, s)
    conf = verify_configuration(g, r=r, s=s, line_scan=line_scan)
    # on the cube locus both diagonals of the four fork points split as well
    extra_expected = field.pow(r, 3) == field.pow(s, 3)
    n_expected = 7 if extra_expected else 5
    named = table_points(field, r, s)
    types = dict(conf.report.points)
    witness = {
        "r": format(r, "x"),
        "s": format(s, "x"),
        "points": {
            label: {"coords": [format(c, "x") for c in p], "type": types.get(p, "missing")}
            for label, p in sorted(named.items())
        },
        "milnor": conf.total_milnor,
        "splitting_lines": [[format(c, "x") for c in l] for l in conf.splitting_lines],
        "certificates": [
            {
                "line": [format(c, "x") for c in line],
                "quintic": cert.quintic.to_json_obj()["terms"],
                "cubic": cert.cubic.to_json_obj()["terms"],
            }
            for line, cert in conf.certificates
        ],
        "findings": list(conf.findings),
    }
    ok = conf.ok and len(conf.splitting_lines) == n_expected
    if not ok and not conf.findings:
        witness["findings"] = [
            f"expected {n_expected} splitting lines, found {len(conf.splitting_lines)}"
        ]
    return ok, witness


def cmd_surface(args) -> dict:
    checks = Checks()
    try:
        field = BinaryField(args.k, args.modulus)
    except Exception as exc:
        raise UsageError(str(exc))

    if args.recognize:
        def recog():
            with open(args.recognize, "r", encoding="utf-8") as fh:
                g = HomPoly.from_json(fh.read())
            res = recognize_surface(g, line_scan=args.line_scan)
            return True, {"t": format(res.t, "x")}

        checks.run("recognize", recog)
        return {"checks": checks.results, "timing_ms": checks.timing, "pass": checks.all_passed}

    if args.r is not None or args.s is not None:
        if args.r is None or args.s is None:
            raise UsageError("--r and --s must be given together")
        r = BinaryField.parse_bits(args.r)
        s = BinaryField.parse_bits(args.s)
        if not (0 <= r < field.q and 0 <= s < field.q):
            raise UsageError(f"r and s must be elements of GF(2^{field.k})")
        if (r == 0 or s == 0) and not args.allow_degenerate:
            raise UsageError("r = 0 or s = 0 is outside the verified regime "
                             "(pass --allow-degenerate to build anyway)")
        pairs = [(r, s)]
    else:
        pairs = _sample_pairs(field, args.samples, args.seed, allow_cube=False)

    def case(pair):
        r, s = pair
        try:
            return _surface_case(field, r, s, args.line_scan)
        except Exception as exc:
            return False, {"r": format(r, "x"), "s": format(s, "x"), "error": str(exc)}

    for (r, s), (ok, witness) in zip(pairs, _pmap(case, pairs)):
        checks.results.append(
            {"name": f"surface_r={format(r, 'x')}_s={format(s, 'x')}", "pass": ok, "witness": witness}
        )

    def dichotomy():
        # the line joining the two opposite fork points splits iff r^3 = s^3
        ok = True
        seen = []
        for r, s in pairs:
            g = schroeer_sextic(field, r, s)
            l = line_through(field, (0, 0, 1), (r, s, 1))
            splits = is_splitting(g, line_poly(field, l)) is not None
            expected = field.pow(r, 3) == field.pow(s, 3)
            seen.append(
                {"r": format(r, "x"), "s": format(s, "x"), "splits": splits, "cube": expected}
            )
            ok = ok and (splits == expected)
        return ok, {"cases": seen}

    checks.run("extra_line_dichotomy", dichotomy)
    return {"checks": checks.results, "timing_ms": checks.timing, "pass": checks.all_passed}


# ---------------------------------------------------------------------------
# everything
# ---------------------------------------------------------------------------

def cmd_all(args) -> dict:
    lat = cmd_lattice(args)
    surf = cmd_surface(args)
    return {
        "checks": lat["checks"] + surf["checks"],
        "timing_ms": {**lat["timing_ms"], **surf["timing_ms"]},
        "pass": lat["pass"] and surf["pass"],
    }


class UsageError(Exception):
    pass


def _render_text(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        lines.append(f"{mark} {c['name']}")
        if not c["pass"]:
            lines.append(f"     witness: {json.dumps(c['witness'], sort_keys=True)}")
    lines.append(f"{'PASS' if report['pass'] else 'FAIL'} overall")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3lat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", default=None, help="write the report to a file")

    lat = sub.add_parser("lattice", help="lattice-side checks")
    common(lat)
    lat.add_argument("--with-extra-glue", choices=EXTRA_GLUE_CHOICES, default=None)
    lat.add_argument("--lemma-box", type=int, default=3)
    lat.add_argument("--inject-corrupt-glue", action="store_true", help=argparse.SUPPRESS)

    surf = sub.add_parser("surface", help="surface-side checks")
    common(surf)
    surf.add_argument("--k", type=int, default=8, help="field is GF(2^k)")
    surf.add_argument("--modulus", type=lambda t: int(t, 0), default=None)
    surf.add_argument("--r", default=None, help="hex bitstring")
    surf.add_argument("--s", default=None, help="hex bitstring")
    surf.add_argument("--samples", type=int, default=3)
    surf.add_argument("--seed", type=int, default=1)
    surf.add_argument("--allow-degenerate", action="store_true")
    surf.add_argument("--line-scan", choices=("full", "singular"), default="singular")
    surf.add_argument("--recognize", default=None, help="polynomial JSON file")

    allp = sub.add_parser("all", help="both suites")
    common(allp)
    allp.add_argument("--with-extra-glue", choices=EXTRA_GLUE_CHOICES, default=None)
    allp.add_argument("--lemma-box", type=int, default=3)
    allp.add_argument("--inject-corrupt-glue", action="store_true", help=argparse.SUPPRESS)
    allp.add_argument("--k", type=int, default=4)
    allp.add_argument("--modulus", type=lambda t: int(t, 0), default=None)
    allp.add_argument("--r", default=None)
    allp.add_argument("--s", default=None)
    allp.add_argument("--samples", type=int, default=3)
    allp.add_argument("--seed", type=int, default=1)
    allp.add_argument("--allow-degenerate", action="store_true")
    allp.add_argument("--line-scan", choices=("full", "singular"), default="singular")
    allp.add_argument("--recognize", default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("command",)}
    try:
        if args.command == "lattice":
            report = cmd_lattice(args)
        elif args.command == "surface":
            report = cmd_surface(args)
        else:
            report = cmd_all(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"config": config, **report}
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = _render_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_CHECK_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
