"""Command-line interface. JSON on stdout, diagnostics on stderr.

Exit codes: 0 success or a true verdict, 1 a false verdict, 2 an error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import constructions as cons
from . import equivalence as eqv
from . import rankcode as rc
from . import representation as rep
from . import search, spreads
from .errors import ParseError, RankForgeError
from .field import FFElement, FieldCtx, make_field_ctx, paper_field
from .linpoly import parse_poly

DEFAULT_FIELD = "p=3,e=1,n=4"
_HINTS = {
    "ParseError": "check the --code / --field syntax, e.g. --field p=3,e=1,n=4,ext=y4-y-1 --code 'G[k=2]'",
    "ZeroCode": "the zero code has no minimum distance; pass a nonzero code",
    "InadmissibleEta": "pick eta with N(eta) != (-1)^(nk) (twisted) or N(-eta) != 1 (gtf)",
    "WorkBoundExceeded": "raise the budget with --budget or RANKFORGE_BUDGET",
    "EnumerationTooLarge": "use a smaller field or code",
}


class UsageError(RankForgeError):
    pass


# --------------------------------------------------------------------------
# parsing of field and code strings

_TERM = re.compile(r"^(?P<c>\d*)\*?(?P<y>y(?:\^?(?P<e>\d+))?)?$")


def parse_int_poly(text: str, var: str = "y") -> list[int]:
    """'y4-y-1' or 'y^4 + 2*y + 1' to a coefficient list, low degree first."""
    s = text.replace(" ", "").replace(var, "y")
    if not s:
        raise ParseError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for pos, (sign, term) in enumerate(re.findall(r"([+-])([^+-]+)", s)):
        m = _TERM.match(term)
        if not m or (not m.group("c") and not m.group("y")):
            raise ParseError(f"bad term {term!r} in {text!r}", 1, pos + 1)
        c = int(m.group("c")) if m.group("c") else 1
        d = (int(m.group("e")) if m.group("e") else 1) if m.group("y") else 0
        coeffs[d] = coeffs.get(d, 0) + (c if sign == "+" else -c)
    return [coeffs.get(i, 0) for i in range(max(coeffs) + 1)]


def _kv(text: str) -> dict[str, str]:
    out = {}
    for part in filter(None, (x.strip() for x in text.split(","))):
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_field(text: str) -> FieldCtx:
    kv = _kv(text)
    unknown = set(kv) - {"p", "e", "n", "ext", "qmod", "alpha"}
    if unknown:
        raise ParseError(f"unknown field keys {sorted(unknown)}")
    try:
        p, e, n = int(kv["p"]), int(kv.get("e", 1)), int(kv.get("n", 1))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"field needs integer p (and optional e, n): {exc}") from None
    ext = parse_int_poly(kv["ext"], "y") if "ext" in kv else None
    qmod = [c % p for c in parse_int_poly(kv["qmod"], "t")] if "qmod" in kv else None
    alpha = None
    if "alpha" in kv:
        alpha = [int(c) for c in kv["alpha"].strip("[]").split(";")] if ";" in kv["alpha"] else int(kv["alpha"])
    return make_field_ctx(p, e, n, q_modulus=qmod, ext_modulus=ext, alpha_hint=alpha)


_CODE = re.compile(r"^(?P<kind>G|H|Hgen|Cf)\[(?P<args>.*)\]$")


def parse_code(ctx: FieldCtx, text: str, verify: bool = False):
    """Returns (code, description) for G[...], H[...], Hgen[...], Cf[f=...], zero, full or a file."""
    s = text.strip()
    if s == "zero":
        return rc.zero_code(ctx), {"kind": "zero"}
    if s == "full":
        return rc.full_space(ctx), {"kind": "full"}
    m = _CODE.match(s)
    if m is None:
        path = Path(s)
        if not path.exists():
            raise ParseError(f"unrecognised code {text!r} (not a construction string or a file)")
        body = path.read_text()
        fmt = "json" if body.lstrip().startswith("{") else "text"
        return rep.parse(ctx if fmt == "json" else None, body, "code", fmt), {"kind": "file", "path": s}
    kind, kv = m.group("kind"), _kv(m.group("args"))
    k = int(kv.get("k", 1))
    sv = int(kv.get("s", 1))
    if kind == "G":
        return cons.gabidulin(ctx, k, sv, verify=verify), {"kind": "G", "k": k, "s": sv}
    if kind == "H":
        eta = ctx.parse(kv.get("eta", "0"))
        h = int(kv.get("h", 0))
        spec = cons.twist_spec(ctx, k, eta, h, sv)
        return cons.twisted(ctx, spec, verify=verify), {"kind": "H", "k": k, "s": sv, "eta": ctx.format(eta), "h": h, "spec": spec}
    if kind == "Hgen":
        pair = cons.FunctionalPair(parse_poly(ctx, kv["phi1"]), parse_poly(ctx, kv["phi2"]))
        return cons.general_twisted(ctx, k, pair, verify=verify), {"kind": "Hgen", "k": k}
    f = parse_poly(ctx, kv["f"])
    return spreads.scattered_code(f), {"kind": "Cf", "f": str(f)}


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return int(float(args.budget))
    env = os.environ.get("RANKFORGE_BUDGET")
    return int(float(env)) if env else search.DEFAULT_WORK_BOUND


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, FFElement):
        return str(o)
    if hasattr(o, "to_json"):
        return o.to_json()
    return str(o)


def _code_summary(code) -> dict:
    return {
        "name": code.metadata.get("name", "code"),
        "dim": code.dim,
        "fp_dim": code.fp_dim,
        "linearity": f"F_{code.scalars}",
        "size": code.size,
    }


# --------------------------------------------------------------------------
# subcommands; each returns (payload, verdict)


def cmd_construct(ctx, args):
    code, desc = parse_code(ctx, args.code)
    out = {**_code_summary(code), "code": code.to_json()}
    if args.out:
        Path(args.out).write_text(rep.serialize(code, "json"))
        out["written"] = args.out
    ok = True
    if args.verify:
        r = rc.is_mrd(code)
        out.update(r.to_json())
        ok = r.mrd
    return out, ok


def cmd_verify(ctx, args):
    code, _ = parse_code(ctx, args.code)
    r = rc.is_mrd(code)
    return {**_code_summary(code), **r.to_json()}, r.mrd


def cmd_distribution(ctx, args):
    code, _ = parse_code(ctx, args.code)
    return {**_code_summary(code), "distribution": rc.rank_distribution(code).to_json()}, True


def _derived(ctx, args, fn):
    code, _ = parse_code(ctx, args.code)
    new = fn(code)
    out = {"input": _code_summary(code), **_code_summary(new), "code": new.to_json()}
    if args.verify:
        out.update(rc.is_mrd(new).to_json())
    return out, True


def cmd_dual(ctx, args):
    return _derived(ctx, args, rc.delsarte_dual)


def cmd_adjoint(ctx, args):
    return _derived(ctx, args, rc.adjoint_code)


def cmd_matrices(ctx, args):
    code, _ = parse_code(ctx, args.code)
    mats = rep.code_matrix_basis(code)
    if args.format == "text":
        return "\n\n".join(rep.format_matrix(M) for M in mats), True
    return {**_code_summary(code), "matrices": [M.tolist() for M in mats]}, True


def cmd_generator(ctx, args):
    code, _ = parse_code(ctx, args.code)
    pts = [ctx.parse(x) for x in args.points.split(",")] if args.points else [ctx.alpha**i for i in range(ctx.n)]
    G = rep.generator_matrix(code, pts)
    if args.format == "text":
        return G.to_text(), True
    return {**_code_summary(code), "points": [str(x) for x in pts], **G.to_json()}, True


def cmd_idealisers(ctx, args):
    code, _ = parse_code(ctx, args.code)
    L, R = eqv.left_idealiser(code), eqv.right_idealiser(code)
    return {
        **_code_summary(code),
        "left_idealiser_size": L.size,
        "right_idealiser_size": R.size,
        "left_idealiser_distribution": rc.rank_distribution(L).to_json(),
        "right_idealiser_distribution": rc.rank_distribution(R).to_json(),
    }, True


def cmd_aut(ctx, args):
    code, desc = parse_code(ctx, args.code)
    if args.brute:
        res = eqv.brute_force_aut(code, extend_rho=args.extend_rho, work_bound=_budget(args))
        sample = [[list(g), list(h), r] for g, h, r in res.elements[: args.sample]]
        return {"order": res.order, "candidates": res.candidates, "sample_elements": sample, "method": "brute"}, True
    if desc["kind"] == "G":
        grp = eqv.predicted_aut_gabidulin(ctx, desc["k"], args.i_range)
    elif desc["kind"] == "H":
        grp = eqv.predicted_aut_twisted(ctx, desc["spec"], args.i_range)
    else:
        raise UsageError("--predicted needs a G[...] or H[...] code; use --brute otherwise")
    out = {**grp.to_json(args.sample), "method": "predicted", "i_range": args.i_range}
    ok = True
    if args.check:
        ok = eqv.verify_aut(code, grp)
        out["verified"] = ok
    return out, ok


def cmd_equiv(ctx, args):
    if not args.twisted:
        raise UsageError("only --twisted equivalence is supported")
    res = eqv.twisted_equivalent(ctx, args.k, (ctx.parse(args.eta), args.h), (ctx.parse(args.nu), args.j))
    return res.to_json(), res.equivalent


def cmd_scattered(ctx, args):
    f = parse_poly(ctx, args.f)
    r = spreads.is_scattered(f)
    out = {"f": str(f), **r.to_json(), "linear_set_size": spreads.linear_set_size(f),
           "scattered_bound": (ctx.order - 1) // (ctx.q - 1)}
    if r.scattered and args.verify:
        out["code"] = rc.is_mrd(spreads.scattered_code(f)).to_json()
    return out, r.scattered


def cmd_lift(ctx, args):
    code, _ = parse_code(ctx, args.code)
    subs = spreads.lifted_code(code)
    dims = sorted({s.dim for s in subs})
    d_s = spreads.lifted_min_distance(code)
    d = rc.min_distance(code)
    return {**_code_summary(code), "subspaces": len(subs), "subspace_dims": dims, "ambient_dim": 2 * ctx.n,
            "min_subspace_distance": d_s, "min_rank_distance": d, "identity_holds": d_s == 2 * d}, d_s == 2 * d


def cmd_semifield(ctx, args):
    if args.gtf:
        kv = _kv(args.gtf)
        mult = spreads.gtf_mult(ctx, ctx.parse(kv.get("eta", "0")), int(kv.get("h", 1)))
        code = spreads.mult_operator_code(mult)
    else:
        code, _ = parse_code(ctx, args.code)
        mult = spreads.spread_mult_from_code(code)
    zd = spreads.has_zero_divisors(mult, _budget(args))
    out = {"spread_set": not zd.found, "zero_divisors": zd.found}
    if zd.witness:
        out["witness"] = [str(x) for x in zd.witness]
    if not zd.found:
        out["field_spread"] = spreads.is_field_spread(code)
    return out, not zd.found


def cmd_puncture(ctx, args):
    code, _ = parse_code(ctx, args.code)
    pc = rc.puncture(code, args.m)
    return {"rows": pc.rows, "cols": pc.cols, "fp_dim": pc.fp_dim, "collapsed": pc.collapsed,
            **(pc.report.to_json() if pc.report else {})}, bool(pc.report and pc.report.mrd)


def cmd_search(ctx, args):
    code, _ = parse_code(ctx, args.start if args.action == "extend" else args.code)
    if args.action == "maximal":
        r = search.is_maximal(code, args.dist, _budget(args))
        return {"maximal": r.maximal, "certificate": None if r.certificate is None else str(r.certificate),
                "work_used": r.work_used}, True
    rep_ = search.extend_code(code, args.dim, args.dist, _budget(args), prune=not args.no_prune, raise_on_budget=False)
    out = rep_.to_json()
    out["wall_time"] = round(out["wall_time"], 3)
    if args.out:
        Path(args.out).write_text(json.dumps([c.to_json() for c in rep_.extensions], sort_keys=True))
        out["written"] = args.out
    return out, not rep_.exceeded


def cmd_reproduce(ctx, args):
    from . import worked_example

    rep_ = worked_example.report()
    checks = {}
    F = paper_field(args.modulus)
    G2 = cons.gabidulin(F, 2)
    H2 = cons.twisted(F, cons.twist_spec(F, 2, F.alpha, 1))
    checks["G2 d"] = rc.min_distance(G2)
    checks["H2(a,1) mrd"] = rc.is_mrd(H2).mrd
    checks["H2(a,1) distribution"] = rc.rank_distribution(H2).to_json()
    H20 = cons.twisted(F, cons.twist_spec(F, 2, F.alpha, 0))
    checks["right idealiser G2 / H2(a,0)"] = [eqv.right_idealiser(G2).size, eqv.right_idealiser(H20).size]
    out = {"worked_example": rep_, "checks": checks,
           "exact_match_stated_modulus": all(rep_["stated (y^4 - y - 1)"]["match"].values())}
    if args.acceptance:
        from . import acceptance

        skip = {int(x) for x in args.skip.split(",") if x.strip()} if args.skip else set()
        results = acceptance.run_all(skip)
        for r in results:
            print(r.line(), file=sys.stderr)
        out["acceptance"] = [r.to_json() for r in results]
    if args.format == "text":
        lines = []
        for label, cmp in rep_.items():
            lines.append(f"{label}: " + ", ".join(f"{k}={'ok' if v else 'DIFF'}" for k, v in cmp["match"].items()))
            for items in cmp["diffs"].values():
                for d in items:
                    where = f"row {d['row']}" + (f" col {d['col']}" if "col" in d else "")
                    lines.append(f"  {d['item']} {where}: printed {d['printed']} computed {d['computed']}")
        for r in out.get("acceptance", []):
            lines.append(f"criterion {r['criterion']}: {'PASS' if r['passed'] else 'FAIL'}")
        return "\n".join(lines), True
    return out, True


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rankforge", description="Rank-metric codes as linearized polynomials.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=DEFAULT_FIELD, help="e.g. p=3,e=1,n=4,ext=y4-y-1")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", default=None, help="work bound (overrides RANKFORGE_BUDGET)")
    common.add_argument("--jobs", type=int, default=1, help="parallelism degree (computations are vectorised in-process)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, code=True, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        if code:
            p.add_argument("--code", required=True, help="G[k=..,s=..], H[k=..,eta=..,h=..,s=..], Hgen[...], Cf[f=...], zero, full or a file")
        p.set_defaults(func=fn)
        return p

    p = add("construct", cmd_construct)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    add("verify", cmd_verify)
    add("distribution", cmd_distribution)
    for name, fn in (("dual", cmd_dual), ("adjoint", cmd_adjoint)):
        add(name, fn).add_argument("--verify", action="store_true")
    add("matrices", cmd_matrices)
    add("generator", cmd_generator).add_argument("--points", help="comma separated, e.g. 1,a,a^2,a^3")
    add("idealisers", cmd_idealisers)
    p = add("aut", cmd_aut)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--predicted", action="store_true", default=True)
    g.add_argument("--brute", action="store_true")
    p.add_argument("--i-range", choices=("full", "theorem"), default="full")
    p.add_argument("--extend-rho", action="store_true")
    p.add_argument("--check", action="store_true", help="verify the predicted group on the code")
    p.add_argument("--sample", type=int, default=10)
    p = add("equiv", cmd_equiv, code=False)
    p.add_argument("--twisted", action="store_true")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--j", type=int, required=True)
    p = add("scattered", cmd_scattered, code=False)
    p.add_argument("--f", required=True, help="e.g. 'X^q + a*X^q3'")
    p.add_argument("--verify", action="store_true")
    add("lift", cmd_lift)
    p = add("semifield", cmd_semifield, code=False)
    p.add_argument("--check", action="store_true", help="zero-divisor test (default action)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--code")
    g.add_argument("--gtf", help="eta=..,h=..")
    p = add("puncture", cmd_puncture)
    p.add_argument("--m", type=int, required=True)
    p = add("search", cmd_search, code=False)
    p.add_argument("action", choices=("extend", "maximal"))
    p.add_argument("--start", help="start code (extend)")
    p.add_argument("--code", help="code to test (maximal)")
    p.add_argument("--dim", type=int)
    p.add_argument("--dist", type=int, required=True)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--out")
    p = add("reproduce-paper", cmd_reproduce, code=False)
    p.add_argument("--modulus", choices=("stated", "displayed"), default="stated",
                   help="field for the extra desk checks")
    p.add_argument("--acceptance", action="store_true", help="also run acceptance criteria 1-10")
    p.add_argument("--skip", help="comma separated criteria to skip, e.g. 2,10")
    return ap


def _config(args, ctx: FieldCtx | None) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["budget"] = _budget(args)
    if ctx is not None:
        cfg["field_resolved"] = ctx.to_json()
    return cfg


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "search":
        if args.action == "extend" and (args.start is None or args.dim is None):
            ap.error("search extend needs --start and --dim")
        if args.action == "maximal" and args.code is None:
            ap.error("search maximal needs --code")
    ctx = None
    try:
        ctx = parse_field(args.field)
        payload, ok = args.func(ctx, args)
    except (RankForgeError, ValueError, KeyError, OSError, ZeroDivisionError) as exc:
        name = type(exc).__name__
        print(f"error: {name}: {exc}", file=sys.stderr)
        print(f"hint: {_HINTS.get(name, 'see rankforge ' + args.command + ' --help')}", file=sys.stderr)
        if args.format == "json":
            print(json.dumps({"config": _config(args, ctx), "error": {"type": name, "message": str(exc)}},
                             sort_keys=True, default=_jsonable))
        return 2
    if isinstance(payload, str):
        print(f"# config {json.dumps(_config(args, ctx), sort_keys=True, default=_jsonable)}")
        print(payload)
    else:
        print(json.dumps({"config": _config(args, ctx), **payload}, sort_keys=True, default=_jsonable))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
