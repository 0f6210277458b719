"""Command-line front end: per-module subcommands and verification suites.

Reports are JSON (or a plain table); randomized suites are driven by one
seeded generator, and the seed plus full configuration are embedded in every
report, so the same invocation reproduces the same bytes (timings aside).
The default output directory honors the WITTKIT_OUT_DIR environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import cech, drw, localcoh, rings, steinberg, weyl, witt, wittdiff


class UnknownSuite(ValueError):
    pass


def _emit(report, args):
    text = json.dumps(report, indent=2, sort_keys=True)
    if getattr(args, "format", "json") == "table":
        text = _tabulate(report)
    out = getattr(args, "out", None)
    if out:
        outdir = os.environ.get("WITTKIT_OUT_DIR", "")
        path = os.path.join(outdir, out) if outdir else out
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _tabulate(report, prefix=""):
    lines = []
    if isinstance(report, dict):
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)):
                lines.append("%s%s:" % (prefix, k))
                lines.append(_tabulate(v, prefix + "  "))
            else:
                lines.append("%s%s\t%s" % (prefix, k, v))
    elif isinstance(report, list):
        for v in report:
            lines.append(_tabulate(v, prefix + "  "))
    else:
        lines.append("%s%s" % (prefix, report))
    return "\n".join(x for x in lines if x)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


# ----------------------------------------------------------------------
# subcommand handlers
# ----------------------------------------------------------------------

def cmd_witt_polys(args):
    upw = witt.build_universal_polys(args.p, args.n)
    upw.check_ghost_compat()

    def encode(polys):
        return [
            [{"e": list(e), "c": c} for e, c in sorted(poly.items())]
            for poly in polys
        ]

    _emit({
        "p": args.p, "n": args.n,
        "sum": encode(upw.sum_polys),
        "prod": encode(upw.prod_polys),
        "neg": encode(upw.neg_polys),
        "ghost_compatible": True,
    }, args)


def cmd_witt_op(args):
    data = _load_json(args.infile)
    xs = [witt.WittVector.from_json(v) for v in data["vectors"]]
    op = args.op
    if op == "add":
        out = witt.witt_add(xs[0], xs[1])
    elif op == "mul":
        out = witt.witt_mul(xs[0], xs[1])
    elif op == "frob":
        out = witt.frobenius(xs[0])
    elif op == "versch":
        out = witt.verschiebung(xs[0])
    elif op == "teich":
        out = witt.teichmuller(xs[0].coords[0], xs[0].n)
    else:
        raise ValueError("unknown op %r" % (op,))
    _emit({"op": op, "result": out.to_json()}, args)


def parse_word(text):
    """Parse 'z0^2 d0[3] z1' into generator tokens."""
    word = []
    for tok in text.split():
        if tok.startswith("z"):
            if "^" in tok:
                var, k = tok[1:].split("^")
                word.append(("z", int(var), int(k)))
            else:
                word.append(("z", int(tok[1:]), 1))
        elif tok.startswith("d"):
            if "[" in tok:
                var, r = tok[1:].rstrip("]").split("[")
                word.append(("d", int(var), int(r)))
            else:
                word.append(("d", int(tok[1:]), 1))
        else:
            raise ValueError("bad token %r" % (tok,))
    return word


def cmd_weyl_nf(args):
    word = parse_word(args.word)
    nv = 1 + max(t[1] for t in word)
    nf = weyl.normal_form(word, args.p, args.n, nv)
    _emit({"word": args.word, "normal_form": nf.to_json()}, args)


def cmd_weyl_apply(args):
    op = weyl.WeylElement.from_json(_load_json(args.op))
    f = rings.LaurentElem.from_json(_load_json(args.poly))
    _emit({"result": weyl.apply(op, f).to_json()}, args)


def cmd_wdiff_lift(args):
    base = weyl.WeylElement.from_json(_load_json(args.op))
    lifted = wittdiff.lift_operator(base, args.n + 1)
    _emit({"lift": lifted.lift.to_json(),
           "provenance": base.to_json()}, args)


_RELATIONS = {"restr": "restriction", "frob": "frobenius",
              "versch": "verschiebung", "filtr": "filtration"}


def cmd_wdiff_verify(args):
    rng = random.Random(args.seed)
    which = _RELATIONS[args.relation]
    reports = []
    for r in range(1, args.p ** 2 + 1):
        reports.append(wittdiff.check_relation(
            which, args.p, args.n, args.d, r, args.samples, rng))
    failures = sum(len(r["failures"]) for r in reports)
    _emit({"relation": which, "seed": args.seed,
           "cases": sum(r["cases"] for r in reports),
           "failures": failures, "per_order": reports}, args)
    return 1 if failures else 0


def cmd_drw_basis(args):
    keys = drw.enumerate_basis(args.p, args.n, args.d, args.i, args.bound)
    _emit({
        "count": len(keys),
        "basis": [
            {"weight": drw.weight_to_json(args.p, args.d, wkey),
             "partition": [list(b) for b in parts]}
            for wkey, parts in keys
        ],
    }, args)


def cmd_drw_act(args):
    data = _load_json(args.elem)
    p, n, d = data["p"], data["n"], data["d"]
    terms = {}
    for t in data["terms"]:
        w = drw.weight_from_json(p, d, t["weight"])
        parts = tuple(tuple(b) for b in t["partition"])
        terms[(w.key(), parts)] = t["c"]
    degree = len(next(iter(terms))[1]) - 1 if terms else data.get("degree", 0)
    elem = drw.DRWElement(p, n, d, degree, terms)
    out = drw.act(args.which, elem)
    _emit({
        "which": args.which,
        "n": out.n,
        "degree": out.degree,
        "terms": [
            {"weight": drw.weight_to_json(p, d, wkey),
             "partition": [list(b) for b in parts], "c": c}
            for (wkey, parts), c in sorted(out.terms.items())
        ],
    }, args)


def cmd_cohomology_line_bundle(args):
    res = cech.witt_cohomology(args.p, args.d, args.n, args.a)
    degrees = [
        {"i": i, "layers": list(m.layers), "length": m.length}
        for i, m in sorted(res.items())
        if args.degree is None or i == args.degree
    ]
    _emit({"case": {"p": args.p, "n": args.n, "d": args.d, "a": args.a},
           "degrees": degrees}, args)


def cmd_cohomology_sweep(args):
    rows = []
    for a in range(args.a_min, args.a_max + 1):
        res = cech.witt_cohomology(args.p, args.d, args.n, a)
        rows.append({
            "a": a,
            "lengths": [res[i].length for i in range(args.d + 1)],
            "h0_layers": list(res[0].layers),
            "hd_layers": list(res[args.d].layers),
        })
    _emit({"p": args.p, "n": args.n, "d": args.d, "rows": rows}, args)


def cmd_localcoh_generate(args):
    rep = localcoh.generation_run(args.p, args.d, args.j, args.bound,
                                  trace=args.trace)
    _emit(rep, args)
    return 0 if not rep["missing"] else 1


def cmd_localcoh_stability(args):
    rep = localcoh.stability_report(args.p, args.n, args.d, args.j)
    _emit(rep, args)
    return 0 if not rep["failures"] else 1


def cmd_steinberg(args):
    # --I names the simple roots inside the parabolic subset I (empty for
    # the Borel); the complex runs over the removed set Delta \ I
    inside = {int(x) for x in args.I.split(",") if x != ""}
    full = set(range(args.dim - 1))
    target = tuple(sorted(full - inside))
    if not target:
        raise ValueError("I must be a proper subset of the simple roots")
    ring = "Z" if args.ring == "Z" else "Zpn"
    rep = steinberg.acyclicity_check(args.q, args.dim - 1, target,
                                     ring=ring, n=args.n, p=args.q)
    rank = steinberg.steinberg_rank(args.q, args.dim - 1, target)
    _emit({"ranks": rank, "homology": rep["homology"],
           "free": rep["cokernel_torsion_free"], "exact": rep["exact"]}, args)
    return 0 if rep["exact"] else 1


# ----------------------------------------------------------------------
# verification suites
# ----------------------------------------------------------------------

def suite_witt_axioms(p, n, seed, samples):
    rng = random.Random(seed)
    fails = []
    for _ in range(samples):
        xs = [
            witt.WittVector(
                p, n, [rings.PrimeFieldElem(p, rng.randrange(p))
                       for _ in range(n)]
            )
            for _ in range(3)
        ]
        x, y, z = xs
        if witt.witt_add(witt.witt_add(x, y), z) != witt.witt_add(
                x, witt.witt_add(y, z)):
            fails.append("add assoc")
        if witt.witt_mul(witt.witt_mul(x, y), z) != witt.witt_mul(
                x, witt.witt_mul(y, z)):
            fails.append("mul assoc")
        if witt.witt_add(x, y) != witt.witt_add(y, x):
            fails.append("add comm")
        if witt.witt_mul(x, y) != witt.witt_mul(y, x):
            fails.append("mul comm")
        lhs = witt.witt_mul(x, witt.witt_add(y, z))
        rhs = witt.witt_add(witt.witt_mul(x, y), witt.witt_mul(x, z))
        if lhs != rhs:
            fails.append("distributivity")
        if witt.witt_add(x, witt.witt_neg(x)).is_zero() is False:
            fails.append("neg")
        if n >= 2:
            if witt.frobenius(witt.verschiebung(x)) != witt.witt_scalar_mul(p, x):
                fails.append("FV=p")
            y1 = witt.restrict(y)
            if witt.witt_mul(x, witt.verschiebung(y1)) != witt.verschiebung(
                    witt.witt_mul(witt.frobenius(x), y1)):
                fails.append("xV(y)=V(F(x)y)")
    return {"suite": "witt-axioms", "p": p, "n": n, "seed": seed,
            "cases": samples, "failures": fails}


def suite_wdiff_relations(p, n, seed, samples):
    rng = random.Random(seed)
    reports = []
    for which in ("restriction", "frobenius", "verschiebung", "filtration"):
        for d in (1, 2):
            for r in range(1, p ** 2 + 1):
                reports.append(wittdiff.check_relation(
                    which, p, min(n, 3), d, r, samples, rng))
    fails = [r for r in reports if r["failures"]]
    return {"suite": "wdiff-relations", "p": p, "n": n, "seed": seed,
            "cases": sum(r["cases"] for r in reports),
            "failures": [
                {"relation": r["relation"], "d": r["d"], "r": r["r"]}
                for r in fails
            ]}


def suite_drw_identities(p, n, seed, _samples):
    fails = []
    cases = 0
    for d in (1, 2, 3):
        bound = 3 * p * p if d < 3 else 6
        for i in range(d + 1):
            for wkey, parts in drw.enumerate_basis(p, n, d, i, bound):
                e = drw.basis_element(p, n, d, wkey, parts)
                cases += 1
                checks = (
                    drw.act("d", drw.act("d", e)).is_zero(),
                    drw.act("F", drw.act("V", e)) == e.scalar_mul(p),
                    drw.act("V", drw.act("F", e)) == e.scalar_mul(p),
                    drw.act("F", drw.act("d", drw.act("V", e))) == drw.act("d", e),
                    drw.act("V", drw.act("d", e)) ==
                    drw.act("d", drw.act("V", e)).scalar_mul(p),
                    drw.act("d", drw.act("F", e)) ==
                    drw.act("F", drw.act("d", e)).scalar_mul(p),
                )
                if not all(checks):
                    fails.append({"d": d, "i": i, "weight": list(wkey)})
    return {"suite": "drw-identities", "p": p, "n": n, "seed": seed,
            "cases": cases, "failures": fails}


def suite_cohomology_sweep(p, n, seed, _samples, d=None):
    fails = []
    rows = []
    dims = (1, 2, 3) if d is None else (d,)
    for dd in dims:
        for a in range(-4, 5):
            res = cech.witt_cohomology(p, dd, n, a)
            from math import comb
            h0 = sum(comb(p ** l * a + dd, dd) for l in range(n)) if a >= 0 else 0
            hd = sum(
                comb(-(p ** l) * a - 1, dd) for l in range(n)
                if -(p ** l) * a - dd - 1 >= 0
            )
            ok = (
                res[0].length == h0
                and res[dd].length == (hd if dd > 0 else h0)
                and all(res[i].length == 0 for i in range(1, dd))
            )
            rows.append({"d": dd, "a": a,
                         "lengths": [res[i].length for i in range(dd + 1)]})
            if not ok:
                fails.append({"d": dd, "a": a})
    return {"suite": "cohomology-sweep", "p": p, "n": n, "seed": seed,
            "cases": len(rows), "failures": fails, "rows": rows}


def suite_localgen(p, seed, d=2, j=0, bound=None):
    bound = bound if bound is not None else 2 * p + 1
    rep = localcoh.generation_run(p, d, j, bound)
    return {"suite": "localgen", "p": p, "seed": seed, "d": d, "j": j,
            "bound": bound, "cases": rep["target"],
            "failures": rep["missing"]}


def suite_steinberg(seed):
    fails = []
    cases = 0
    for (q, d, want) in ((2, 1, 2), (3, 1, 3), (2, 2, 8)):
        cases += 1
        rep = steinberg.steinberg_rank(q, d)
        if not (rep["rank"] == want and rep["free"] and rep["exact"]):
            fails.append({"q": q, "d": d, "got": rep})
    return {"suite": "steinberg", "seed": seed, "cases": cases,
            "failures": fails}


def run_suite(name, p=3, n=3, seed=0, samples=100, d=None, j=0, bound=None):
    """Dispatch a named verification suite; see the CLI `verify` command."""
    if name == "witt-axioms":
        return suite_witt_axioms(p, n, seed, samples)
    if name == "wdiff-relations":
        return suite_wdiff_relations(p, min(n, 3), seed, samples)
    if name == "drw-identities":
        return suite_drw_identities(p, min(n, 3), seed, samples)
    if name == "cohomology-sweep":
        return suite_cohomology_sweep(p, min(n, 3), seed, samples, d=d)
    if name == "localgen":
        return suite_localgen(p, seed, d=d if d else 2, j=j, bound=bound)
    if name == "steinberg":
        return suite_steinberg(seed)
    raise UnknownSuite("unknown suite %r" % (name,))


def cmd_verify(args):
    t0 = time.time()
    report = run_suite(args.suite, p=args.p, n=args.n, seed=args.seed,
                       samples=args.samples, d=args.d, j=args.j,
                       bound=args.bound)
    report["config"] = {
        "suite": args.suite, "p": args.p, "n": args.n, "seed": args.seed,
        "samples": args.samples,
    }
    report["elapsed_s"] = round(time.time() - t0, 3)
    _emit(report, args)
    return 1 if report["failures"] else 0


# ----------------------------------------------------------------------
# argument wiring
# ----------------------------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(
        prog="wittkit",
        description="exact Witt vector / de Rham-Witt / local cohomology "
                    "computations",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report to this file")
        sp.add_argument("--format", choices=("json", "table"), default="json")

    g = sub.add_parser("witt", help="Witt vector arithmetic")
    gs = g.add_subparsers(dest="sub", required=True)
    sp = gs.add_parser("polys")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_witt_polys)
    sp = gs.add_parser("op")
    sp.add_argument("--op", required=True,
                    choices=("add", "mul", "frob", "versch", "teich"))
    sp.add_argument("--in", dest="infile", required=True)
    common(sp)
    sp.set_defaults(func=cmd_witt_op)

    g = sub.add_parser("weyl", help="crystalline Weyl algebra")
    gs = g.add_subparsers(dest="sub", required=True)
    sp = gs.add_parser("nf")
    sp.add_argument("--word", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_weyl_nf)
    sp = gs.add_parser("apply")
    sp.add_argument("--op", required=True)
    sp.add_argument("--poly", required=True)
    common(sp)
    sp.set_defaults(func=cmd_weyl_apply)

    g = sub.add_parser("wdiff", help="Witt differential operators")
    gs = g.add_subparsers(dest="sub", required=True)
    sp = gs.add_parser("lift")
    sp.add_argument("--op", required=True)
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_wdiff_lift)
    sp = gs.add_parser("verify")
    sp.add_argument("--relation", required=True, choices=sorted(_RELATIONS))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=25)
    common(sp)
    sp.set_defaults(func=cmd_wdiff_verify)

    g = sub.add_parser("drw", help="de Rham-Witt complex of affine space")
    gs = g.add_subparsers(dest="sub", required=True)
    sp = gs.add_parser("basis")
    for flag in ("--p", "--n", "--d", "--i", "--bound"):
        sp.add_argument(flag, type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_drw_basis)
    sp = gs.add_parser("act")
    sp.add_argument("--which", required=True, choices=("F", "V", "d"))
    sp.add_argument("--elem", required=True)
    common(sp)
    sp.set_defaults(func=cmd_drw_act)

    g = sub.add_parser("cohomology", help="Witt line bundles on P^d")
    gs = g.add_subparsers(dest="sub", required=True)
    sp = gs.add_parser("line-bundle")
    for flag in ("--p", "--n", "--d", "--a"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--degree", type=int)
    common(sp)
    sp.set_defaults(func=cmd_cohomology_line_bundle)
    sp = gs.add_parser("sweep")
    for flag in ("--p", "--n", "--d"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--a-min", dest="a_min", type=int, required=True)
    sp.add_argument("--a-max", dest="a_max", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_cohomology_sweep)

    g = sub.add_parser("localcoh", help="local cohomology generation")
    gs = g.add_subparsers(dest="sub", required=True)
    sp = gs.add_parser("generate")
    for flag in ("--p", "--d", "--j", "--bound"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--trace", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_localcoh_generate)
    sp = gs.add_parser("stability")
    for flag in ("--p", "--n", "--d", "--j"):
        sp.add_argument(flag, type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_localcoh_stability)

    sp = sub.add_parser("steinberg", help="generalized Steinberg modules")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True,
                    help="the matrix size d+1")
    sp.add_argument("--I", default="",
                    help="comma-separated simple roots inside the parabolic")
    sp.add_argument("--ring", choices=("Z", "Zpn"), default="Z")
    sp.add_argument("--n", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_steinberg)

    sp = sub.add_parser("verify", help="deterministic verification suites")
    sp.add_argument("suite", choices=(
        "witt-axioms", "wdiff-relations", "drw-identities",
        "cohomology-sweep", "localgen", "steinberg"))
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--d", type=int)
    sp.add_argument("--j", type=int, default=0)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=100)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    code = args.func(args)
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
