"""Command-line front end.

Every invocation produces one report (schema ``superchar/1``) rendered as JSON,
CSV or an aligned text table. Exit status: 0 ok, 1 domain error or failed
check, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .closed_forms import KINDS, branch_candidates, invariant_table, make_pair
from .core import Signature, format_weight, parse_weight
from .errors import ParseError, SuperCharError, UnsupportedFormat
from .exact_linear import format_scalar
from .roots import characteristic_roots, roots_distinct

SCHEMA = "superchar/1"
FORMATS = ("json", "csv", "table")
CSV_TABLE_HEADER = ["r"] + list(KINDS)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="superchar", description="Branching invariants of gl(m|n) inside gl(m|n+1).")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, top=False, weight=False, subw=False):
        sp.add_argument("--m", type=int, help="even rank of gl(m|n)")
        sp.add_argument("--n", type=int, help="odd rank of gl(m|n); --top weights live on gl(m|n+1)")
        if weight:
            sp.add_argument("--weight", required=True, help='gl(m|n) weight, e.g. "1,0|0"')
        if top:
            sp.add_argument("--top", required=True, help='gl(m|n+1) weight, e.g. "4|0,-1"')
        if subw:
            sp.add_argument("--sub", required=True, help="gl(m|n) weight in the restriction")
        sp.add_argument("--format", default="json", help="json, csv or table")
        sp.add_argument("--cache-dir", default=None, help="Kac module cache (default $SUPERCHAR_CACHE)")
        return sp

    common(sub.add_parser("roots", help="characteristic roots of a weight"), weight=True)
    common(sub.add_parser("branch", help="betweenness candidates of a top weight"), top=True)
    common(sub.add_parser("table", help="closed-form invariants for a (top, sub) pair"), top=True, subw=True)
    common(sub.add_parser("verify-kac", help="compare every closed form with the explicit Kac module"), top=True)
    t = common(sub.add_parser("tower", help="tau/sigma invariants and their identities"), top=True)
    t.add_argument("--K", type=int, default=4, help="highest power (default 4)")
    common(sub.add_parser("tensor-check", help="decompose V x V(L) and V* x V(L)"), weight=True)
    return p


def _sig(args, top: bool) -> Signature | None:
    if args.m is None and args.n is None:
        return None
    if args.m is None or args.n is None:
        raise UsageError("--m and --n must be given together")
    return Signature(args.m, args.n + 1 if top else args.n)


def _cache(args):
    return args.cache_dir or os.environ.get("SUPERCHAR_CACHE") or None


# command bodies: each returns (payload, failure) where failure is None or (name, detail)


def cmd_roots(args):
    w = parse_weight(args.weight, _sig(args, False))
    rs = characteristic_roots(w)
    return {
        "weight": format_weight(w),
        "alpha": [format_scalar(x) for x in rs.vector_roots],
        "alphabar": [format_scalar(x) for x in rs.adjoint_roots],
        "distinct": roots_distinct(rs),
    }, None


def cmd_branch(args):
    top = parse_weight(args.top, _sig(args, True))
    top.require_integral()
    top.require_dominant()
    cands = [format_weight(w) for w in branch_candidates(top)]
    return {"top": format_weight(top), "candidates": cands, "count": len(cands)}, None


def cmd_table(args):
    top = parse_weight(args.top, _sig(args, True))
    sub = parse_weight(args.sub, _sig(args, False))
    return invariant_table(make_pair(top, sub)).to_json(), None


def cmd_verify_kac(args):
    from .verification import verify_kac

    top = parse_weight(args.top, _sig(args, True))
    rep = verify_kac(top, cache_dir=_cache(args))
    fail = None if rep["ok"] else ("ConsistencyFailure", f"{rep['counts']['FAIL']} comparisons failed")
    return rep, fail


def cmd_tower(args):
    from .forge import build_kac_module, restrict_decompose
    from .tower import tower_scalars

    top = parse_weight(args.top, _sig(args, True))
    if args.K < 2:
        raise UsageError("--K must be at least 2")
    kac = build_kac_module(top, cache_dir=_cache(args))
    rep = tower_scalars(kac, restrict_decompose(kac), args.K)
    bad = sorted(k for k, v in rep.flags.items() if v)
    return rep.to_json(), (("ConsistencyFailure", "nonzero residual: " + ", ".join(bad)) if bad else None)


def cmd_tensor_check(args):
    from .forge import build_kac_module, tensor_vector_decompose

    w = parse_weight(args.weight, _sig(args, False))
    kac = build_kac_module(w, cache_dir=_cache(args))
    out = {"weight": format_weight(w), "dim": kac.dim}
    ok = True
    for label, dual in (("vector", False), ("dual", True)):
        dec = tensor_vector_decompose(kac, dual)
        comps = [{"weight": format_weight(c.highest_weight), "dim": c.dim} for c in dec.parts]
        total = sum(c["dim"] for c in comps)
        ok = ok and total == w.signature.size * kac.dim
        out[label] = {"components": comps, "total_dim": total}
    return out, None if ok else ("IncompleteDecomposition", "component dimensions do not add up")


COMMANDS = {
    "roots": cmd_roots,
    "branch": cmd_branch,
    "table": cmd_table,
    "verify-kac": cmd_verify_kac,
    "tower": cmd_tower,
    "tensor-check": cmd_tensor_check,
}


_WEIGHT_FLAGS = ("--top", "--sub", "--weight")


def _glue_weight_values(argv: list[str]) -> list[str]:
    """Weights may start with '-', which argparse would take for an option."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _WEIGHT_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def parse_and_dispatch(argv: list[str]) -> tuple[dict, int]:
    """Run one request; returns the report and the exit code."""
    parser = build_parser()
    t0 = time.perf_counter()
    rep = {"schema": SCHEMA, "command": argv[0] if argv else None, "argv": list(argv)}
    try:
        args = parser.parse_args(_glue_weight_values(argv))
        if args.command is None:
            raise UsageError("no command given")
        payload, failure = COMMANDS[args.command](args)
        rep["payload"] = payload
        if failure is None:
            rep["status"] = "ok"
            code = 0
        else:
            rep["status"] = "error"
            rep["error"] = {"name": failure[0], "detail": failure[1]}
            code = 1
    except UsageError as exc:
        rep["status"] = "error"
        rep["error"] = {"name": "UsageError", "detail": f"{exc}\n{parser.format_usage().strip()}"}
        code = 2
    except ParseError as exc:
        rep["status"] = "error"
        rep["error"] = {"name": exc.name, "detail": str(exc)}
        code = 2
    except SuperCharError as exc:
        rep["status"] = "error"
        rep["error"] = {"name": exc.name, "detail": str(exc)}
        code = 1
    rep["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return rep, code


# rendering


def _csv_rows(rep: dict) -> list[list]:
    cmd, pay = rep.get("command"), rep.get("payload")
    if rep["status"] != "ok" and pay is None:
        return [["status", "name", "detail"], ["error", rep["error"]["name"], rep["error"]["detail"]]]
    if cmd == "table":
        from .closed_forms import InvariantTable
        return [CSV_TABLE_HEADER] + InvariantTable.from_json(pay).rows()
    if cmd == "roots":
        return [["r", "alpha", "alphabar"]] + [[r + 1, a, b] for r, (a, b) in
                                               enumerate(zip(pay["alpha"], pay["alphabar"]))]
    if cmd == "branch":
        return [["index", "weight"]] + [[i + 1, w] for i, w in enumerate(pay["candidates"])]
    if cmd == "verify-kac":
        rows = [["component", "check", "r", "status"]]
        for name, st in pay["module_checks"].items():
            rows.append(["*", name, "", st])
        for c in pay["components"]:
            for kind, sts in c["checks"].items():
                rows += [[c["weight"], kind, r + 1, s] for r, s in enumerate(sts)]
        return rows
    if cmd == "tower":
        K = pay["K"]
        rows = [["component", "k", "tau", "sigma", "I", "Ihat"]]
        for c in pay["components"]:
            for k in range(K + 1):
                rows.append([c["weight"], k, c["tau"][k],
                             c["sigma"][k] if k < len(c["sigma"]) else "",
                             c["I"][k - 1] if k else "", pay["Ihat"][k - 1] if k else ""])
        return rows
    if cmd == "tensor-check":
        rows = [["product", "weight", "dim"]]
        for label in ("vector", "dual"):
            rows += [[label, c["weight"], c["dim"]] for c in pay[label]["components"]]
        return rows
    raise UnsupportedFormat(f"no csv layout for {cmd!r}")


def _table_text(rep: dict) -> str:
    if rep["status"] != "ok":
        detail = " ".join(rep["error"]["detail"].split())
        return f"ERROR {rep['error']['name']}: {detail}"
    if rep["command"] == "verify-kac":
        from .verification import format_matrix
        return format_matrix(rep["payload"])
    rows = [[str(x) for x in row] for row in _csv_rows(rep)]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip() for r in rows)


def render_report(rep: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(rep, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(rep))
        return buf.getvalue()
    if fmt == "table":
        return _table_text(rep) + "\n"
    raise UnsupportedFormat(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def parse_report(text: str) -> dict:
    """Inverse of render_report(..., "json")."""
    rep = json.loads(text)
    if rep.get("schema") != SCHEMA:
        raise ParseError(f"not a {SCHEMA} report")
    return rep


def _requested_format(argv) -> str:
    for i, a in enumerate(argv):
        if a == "--format" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--format="):
            return a.split("=", 1)[1]
    return "json"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    rep, code = parse_and_dispatch(argv)
    fmt = _requested_format(argv)
    try:
        text = render_report(rep, fmt)
    except UnsupportedFormat as exc:
        text = render_report({**rep, "status": "error", "error": {"name": exc.name, "detail": str(exc)}},
                             "table")
        code = 2
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
