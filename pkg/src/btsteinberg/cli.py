"""Command-line driver.  Every command prints one JSON report on stdout.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error,
3 a resource bound was hit (the bound is named in the report).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import acceptance
from . import flagmodel as fm
from . import harmonic as hm
from .apartment import verify_lemma_tec
from .building import MAX_CHAMBERS_ENV, build_ball
from .errors import InvalidInput, MarginError, ResourceLimitError
from .linalg import parse_field
from .rootdata import CartanType, build_root_datum
from .weyl import group

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def check(name, expected, got):
    return {"name": name, "expected": expected, "got": got, "pass": expected == got}


def _cartan(args):
    return build_root_datum(CartanType(args.type.upper(), args.rank))


def _letters(text):
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InvalidInput(f"bad word {text!r}") from None


# -- commands (each returns (parameters, checks, result)) ----------------------


def cmd_rootdata(args):
    rd = _cartan(args)
    return {"type": args.type, "rank": args.rank}, [], rd.to_json()


def cmd_weyl(args):
    rd = _cartan(args)
    G = group(rd)
    letters = _letters(args.word)
    if any(not 0 <= s <= rd.rank for s in letters):
        raise InvalidInput(f"letters must lie in 0..{rd.rank}")
    params = {"type": args.type, "rank": args.rank, "op": args.op, "word": letters}
    if args.op == "longest":
        w = G.longest_element(omit=args.omit)
        params["omit"] = args.omit
    else:
        w = G.word(letters)
    word = G.reduced_word(w)
    res = {"length": G.length(w), "reduced_word": word, "element": w.to_json()}
    checks = [check("length_matches_reduced_word", len(word), res["length"])]
    if args.op == "longest" and args.omit is None:
        checks.append(check("longest_length_is_num_positive_roots", len(rd.positive_roots), res["length"]))
    return params, checks, res


def cmd_lemma_tec(args):
    rd = _cartan(args)
    rows = verify_lemma_tec(rd)
    checks = [check(f"sign_sigma_{r['i']}", r["sign_length"], r["sign_sigma"]) for r in rows]
    res = {"J": sorted(rd.special_set_J), "rows": rows, "vacuous": not rows}
    return {"type": args.type, "rank": args.rank}, checks, res


def cmd_ball(args):
    ball = build_ball(args.n, args.p, args.radius)
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump(ball.to_json(), fh)
    bad = acceptance.counting_violations(ball) if args.radius > 0 else []
    res = {
        "num_chambers": len(ball),
        "num_interior_panels": len(ball.panels),
        "layers": [ball.distances.count(d) for d in range(args.radius + 1)],
        "dump": args.dump,
    }
    checks = [check("counting_laws_violations", 0, len(bad))]
    return {"n": args.n, "p": args.p, "radius": args.radius}, checks, res


def cmd_harmonic(args):
    K = parse_field(args.coeff)
    ball = build_ball(args.n, args.p, args.radius)
    basis = hm.solve_harmonic(ball, K)
    checks = [check("hc2_violations", 0, sum(len(hm.check_hc2(h)) for h in basis))]
    res = {"num_chambers": len(ball), "dimension": len(basis)}
    if args.verify_relations:
        v = hm.verify_main_vanishing(ball, K)
        res.update({k: v[k] for k in ("parahoric_generators", "relation_generators")})
        checks.append(check("nonvanishing_pairings", 0, len(v["failures"])))
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump({"coeff": str(K), "basis": [[str(x) for x in h.values] for h in basis]}, fh)
        res["dump"] = args.dump
    params = {"n": args.n, "p": args.p, "radius": args.radius, "coeff": str(K)}
    return params, checks, res


def cmd_flags(args):
    n, p, k = args.n, args.p, args.level
    if not 1 <= k <= 3:
        raise InvalidInput("level must lie in 1..3")
    params = {"n": n, "p": p, "level": k, "op": args.op}
    checks = []
    res = {"num_flags": len(fm.flag_space(n, p, k))}
    if args.op == "dim":
        d = fm.steinberg_dimension(n, p, k)
        res["dimension"] = d
        if k == 1:
            checks.append(check("steinberg_dimension", p ** (n * (n - 1) // 2), d))
        if args.radius is not None:
            res["theta_coverage"] = fm.theta_image_rank(build_ball(n, p, args.radius), k)
            params["radius"] = args.radius
    elif args.op == "partition":
        res["cells"] = {}
        for i in range(1, n):
            r = fm.verify_partition_BiP(n, p, k, i, detail=True)
            res["cells"][i] = r
            checks.append(check(f"partition_B{i}P", True, r["ok"]))
    else:
        if k < 2:
            raise InvalidInput("bwp samples g from a ball of radius level-1; use level >= 2")
        rng = random.Random(args.seed)
        params.update(seed=args.seed, samples=args.samples)
        cases = []
        for _ in range(args.samples):
            g, word = acceptance.random_bwp_case(n, p, k, rng)
            r = fm.verify_lemma_bwp(n, p, k, g, word, detail=True)
            cases.append({"g": [[str(x) for x in row] for row in g], "word": word, **r})
            checks.append(check(f"bwp_{len(cases)}", True, r["ok"]))
        res["cases"] = cases
    return params, checks, res


def cmd_verify_all(args):
    if args.only:
        wanted = [x.strip() for x in args.only.split(",")]
        if any(x not in dict(acceptance.CHECKS) for x in wanted):
            raise InvalidInput(f"criteria are numbered 1..{len(acceptance.CHECKS)}")
    else:
        wanted = [k for k, _ in acceptance.CHECKS]
    reports = [acceptance.run_check(k, seed=args.seed, quick=args.quick) for k in wanted]
    checks = [
        {"name": f"{r['criterion']}:{r['name']}", "expected": r["expected"], "got": r["got"], "pass": r["pass"]}
        for r in reports
    ]
    res = {"seconds": {r["criterion"]: r["seconds"] for r in reports}}
    return {"quick": args.quick, "seed": args.seed, "only": wanted}, checks, res


# -- parser --------------------------------------------------------------------


def build_parser():
    def options(default):
        # global flags are accepted before or after the subcommand; the
        # subcommand copies use SUPPRESS so they do not reset the top level
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--human", action="store_true", default=default(False), help="also print a table on stderr")
        p.add_argument("--seed", type=int, default=default(acceptance.DEFAULT_SEED), help="seed for random checks")
        return p

    common = options(lambda _: argparse.SUPPRESS)
    ap = argparse.ArgumentParser(
        prog="btsteinberg",
        parents=[options(lambda v: v)],
        description="Exact checks on affine Weyl groups, buildings and harmonic cochains.",
        epilog=f"Ball construction is capped by ${MAX_CHAMBERS_ENV} chambers; "
        f"flag enumeration by ${fm.MAX_FLAGS_ENV} flags.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def typed(name, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("--type", required=True, help="Cartan family, A..G")
        p.add_argument("--rank", type=int, required=True)
        return p

    typed("rootdata", "dump a root datum")
    p = typed("weyl", "length / reduced word / longest element")
    p.add_argument("--op", choices=["length", "word", "longest"], required=True)
    p.add_argument("--word", default="", help="letters 0..l, e.g. '0 1 2'")
    p.add_argument("--omit", type=int, default=None, help="with --op longest: w_i for the parabolic omitting i")
    typed("lemma-tec", "sign(sigma_i) against (-1)^l(w_i w_0)")

    def sized(name, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("--n", type=int, required=True, choices=[2, 3])
        p.add_argument("--p", type=int, required=True)
        return p

    p = sized("ball", "build a chamber ball")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--dump", default=None)
    p = sized("harmonic", "solve for harmonic cochains")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--coeff", default="Q", help="Q or Fl:<prime>")
    p.add_argument("--verify-relations", action="store_true")
    p.add_argument("--dump", default=None)
    p = sized("flags", "finite-level flag variety")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--op", choices=["dim", "partition", "bwp"], required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--radius", type=int, default=None, help="with --op dim: report theta coverage from this ball")
    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", default=None, help="comma separated criterion numbers")
    return ap


COMMANDS = {
    "rootdata": cmd_rootdata,
    "weyl": cmd_weyl,
    "lemma-tec": cmd_lemma_tec,
    "ball": cmd_ball,
    "harmonic": cmd_harmonic,
    "flags": cmd_flags,
    "verify-all": cmd_verify_all,
}


def _table(report):
    lines = [f"{report['command']}  {json.dumps(report['parameters'])}"]
    for c in report["checks"]:
        flag = "PASS" if c["pass"] else "FAIL"
        lines.append(f"  {flag}  {c['name']}: expected {c['expected']}, got {c['got']}")
    t = report["totals"]
    lines.append(f"  {t['passed']}/{t['checks']} passed in {report['wall_time']:.2f}s")
    return "\n".join(lines)


def run(argv=None):
    """Returns (report dict, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if e.code == 0:
            return None, EXIT_OK
        return {"command": None, "error": "usage"}, EXIT_USAGE
    t0 = time.perf_counter()
    report = {"command": args.command}
    try:
        params, checks, result = COMMANDS[args.command](args)
    except ResourceLimitError as e:
        report.update(error="resource_limit", message=str(e), bound=e.bound)
        return report, EXIT_RESOURCE
    except MarginError as e:
        report.update(error="margin", message=str(e), required=e.required)
        return report, EXIT_USAGE
    except InvalidInput as e:
        report.update(error="invalid_input", message=str(e))
        return report, EXIT_USAGE
    passed = sum(c["pass"] for c in checks)
    report.update(
        parameters=params,
        checks=checks,
        totals={"checks": len(checks), "passed": passed, "failed": len(checks) - passed},
        result=result,
        wall_time=round(time.perf_counter() - t0, 3),
    )
    report["_human"] = args.human
    return report, EXIT_OK if passed == len(checks) else EXIT_FAIL


def main(argv=None):
    report, code = run(argv)
    if report is None:  # --help
        return code
    human = report.pop("_human", False)
    print(json.dumps(report, default=str))
    if human and "checks" in report:
        print(_table(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
