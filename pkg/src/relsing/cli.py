"""Command-line interface: ``relsing WORKSPACE COMMAND [ARGS] [OPTIONS]``.

Exit codes: 0 success, 1 mismatch or refutation, 2 inconclusive, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gcat, resolve, singcat, subcat
from .workspace import Workspace, WorkspaceError, load

SCHEMA = "relsing.report/1"
OK, MISMATCH, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class CommandError(ValueError):
    pass


def parse_shifts(text: str) -> list:
    """``"-2..2"`` or ``"0,1,3"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise CommandError(f"bad shift range {text!r}") from None


def _corpus(ws: Workspace, opts) -> list:
    if opts.corpus:
        return [ws.module(n.strip()) for n in opts.corpus.split(",") if n.strip()]
    names = ws.defaults.get("corpus")
    if names:
        return [ws.module(n) for n in names]
    raise CommandError("--corpus is required")


def _need(args, count, usage):
    if len(args) != count:
        raise CommandError(f"usage: {usage}")
    return args


def _int(text, what):
    try:
        return int(text)
    except ValueError:
        raise CommandError(f"{what} must be an integer, got {text!r}") from None


def _dims(m) -> list:
    return list(m.dims)


def _cmd_contains(ws, c, a, o, p):
    (m,) = _need(a, 1, "contains MODULE")
    return {"module": m, "contains": subcat.contains(c, ws.module(m))}, OK


def _cmd_admissible(ws, c, a, o, p):
    (m,) = _need(a, 1, "is-admissible MODULE")
    return {"module": m, "admissible": subcat.is_admissible_for(c, ws.module(m))}, OK


def _cmd_self_orthogonal(ws, c, a, o, p):
    _need(a, 0, "self-orthogonal")
    return {"self_orthogonal": subcat.is_self_orthogonal_up_to(c, p["bound"])}, OK


def _cmd_rel_ext(ws, c, a, o, p):
    m, n, deg = _need(a, 3, "rel-ext MODULE MODULE DEGREE")
    d = resolve.rel_ext_dim(c, ws.module(m), ws.module(n), _int(deg, "degree"))
    return {"source": m, "target": n, "degree": int(deg), "dim": d}, OK


def _cmd_cdim(ws, c, a, o, p):
    (m,) = _need(a, 1, "cdim MODULE")
    d = resolve.cdim(c, ws.module(m), p["bound"])
    return {"module": m, "cdim": str(d)}, (OK if d.status == "exact" else INCONCLUSIVE)


def _cmd_cdim_consistency(ws, c, a, o, p):
    (m,) = _need(a, 1, "cdim-consistency MODULE")
    r = resolve.cdim_consistency(c, ws.module(m), p["bound"])
    out = {"module": m, "cdim": str(r.cdim), "family": r.family, "rows": r.rows,
           "discrepancies": r.discrepancies, "ok": r.ok}
    return out, (OK if r.ok else MISMATCH)


def _cmd_resolve(ws, c, a, o, p):
    (x,) = _need(a, 1, "resolve COMPLEX")
    f = resolve.resolve_complex(c, ws.complex(x), p["bound"])
    src = f.source
    return {"complex": x, "terms": {str(n): _dims(src.term(n)) for n in src.degrees},
            "all_terms_in_C": all(subcat.contains(c, src.term(n)) for n in src.degrees)}, OK


def _cmd_dch_hom(ws, c, a, o, p):
    x, y, n = _need(a, 3, "dch-hom COMPLEX COMPLEX SHIFT")
    d = resolve.dch_hom_dim(c, ws.complex(x), ws.complex(y), _int(n, "shift"))
    return {"source": x, "target": y, "shift": int(n), "dim": d}, OK


def _cmd_stable_hom(ws, c, a, o, p):
    m, n = _need(a, 2, "stable-hom MODULE MODULE")
    r = singcat.stable_hom(c, ws.module(m), ws.module(n), p["bound"])
    return {"source": m, "target": n, "dim_hom": r.dim_hom, "dim_factoring": r.dim_factoring,
            "dim_stable": r.dim_stable}, OK


def _cert_status(cert) -> int:
    return {gcat.CERTIFIED: OK, gcat.REFUTED: MISMATCH}.get(cert.status, INCONCLUSIVE)


def _cmd_gp(ws, c, a, o, p):
    (m,) = _need(a, 1, "gp-membership MODULE")
    cert = gcat.gp_membership(c, ws.module(m), p["bound"], p["seed"])
    data = gcat.certificate_to_dict(cert)
    if o.out:
        Path(o.out).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    out = {"module": m, "status": cert.status, "summary": cert.summary(), "refutation": cert.refutation}
    if cert.certified:
        out["window"] = [cert.lo, cert.hi]
        out["period"] = cert.period()
    return out, _cert_status(cert)


def _cmd_verify_certificate(ws, c, a, o, p):
    (path,) = _need(a, 1, "verify-certificate FILE")
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        cert = gcat.certificate_from_dict(ws.algebra, data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return {"file": Path(path).name, "ok": False, "reason": f"unreadable certificate: {exc}"}, MISMATCH
    v = gcat.verify_certificate(c, cert)
    return {"file": Path(path).name, "status": cert.status, "ok": v.ok, "reason": v.reason}, (OK if v else MISMATCH)


def _cmd_cg_dim(ws, c, a, o, p):
    (m,) = _need(a, 1, "cg-dim MODULE")
    d = gcat.cg_dim(c, ws.module(m), p["depth"], p["bound"], p["seed"])
    return {"module": m, "cg_dim": str(d)}, (OK if d.status == "exact" else INCONCLUSIVE)


def _cmd_perp(ws, c, a, o, p):
    (m,) = _need(a, 1, "perp MODULE")
    bad = gcat.perp_failure(c, ws.module(m), p["bound"])
    return {"module": m, "member": bad is None, "failure": bad}, (OK if bad is None else MISMATCH)


def _cmd_frobenius(ws, c, a, o, p):
    _need(a, 0, "frobenius --corpus NAMES")
    r = gcat.frobenius_check(c, _corpus(ws, o), p["bound"], p["seed"])
    return {"subjects": r.subjects, "checks": r.checks, "failures": r.failures, "ok": r.ok}, (OK if r.ok else MISMATCH)


def _cmd_sg_rep(ws, c, a, o, p):
    (x,) = _need(a, 1, "sg-rep COMPLEX")
    r = singcat.sg_representative(c, ws.complex(x), p["depth"], p["bound"], p["seed"])
    return {"complex": x, "module": _dims(r.module), "shift": r.shift, "normalized": _dims(r.normalized),
            "zero": r.is_zero, "provenance": r.provenance}, OK


def _cmd_sg_hom(ws, c, a, o, p):
    x, y, n = _need(a, 3, "sg-hom COMPLEX COMPLEX SHIFT")
    d = singcat.sg_hom_dim(c, ws.complex(x), ws.complex(y), _int(n, "shift"), p["depth"], p["bound"], p["seed"])
    return {"source": x, "target": y, "shift": int(n), "dim": d}, OK


def _cmd_verify_equivalence(ws, c, a, o, p):
    _need(a, 0, "verify-equivalence --corpus NAMES --shifts LO..HI")
    shifts = parse_shifts(o.shifts or ws.defaults.get("shifts", "-2..2"))
    r = singcat.verify_equivalence(c, _corpus(ws, o), shifts, p["depth"], p["bound"], p["seed"])
    p["shifts"] = shifts
    out = {"corpus": r.corpus, "table": r.table, "mismatches": r.mismatches, "transport": r.transport,
           "density": r.density, "skipped": r.skipped, "ok": r.ok}
    return out, (OK if r.ok else MISMATCH)


def _cmd_sg_triviality(ws, c, a, o, p):
    _need(a, 0, "sg-triviality --corpus NAMES")
    r = singcat.sg_triviality(c, _corpus(ws, o), p["bound"], p["seed"])
    return {"modules": r.modules, "cdims": r.cdims, "max_cdim": r.max_cdim, "obstructions": r.obstructions,
            "stable_homs": r.stable_homs, "trivial": r.trivial, "trusted_input": r.trusted_input}, OK


COMMANDS = {
    "contains": _cmd_contains,
    "is-admissible": _cmd_admissible,
    "self-orthogonal": _cmd_self_orthogonal,
    "rel-ext": _cmd_rel_ext,
    "cdim": _cmd_cdim,
    "cdim-consistency": _cmd_cdim_consistency,
    "resolve": _cmd_resolve,
    "dch-hom": _cmd_dch_hom,
    "stable-hom": _cmd_stable_hom,
    "gp-membership": _cmd_gp,
    "certify": _cmd_gp,
    "verify-certificate": _cmd_verify_certificate,
    "cg-dim": _cmd_cg_dim,
    "perp": _cmd_perp,
    "frobenius": _cmd_frobenius,
    "sg-rep": _cmd_sg_rep,
    "sg-hom": _cmd_sg_hom,
    "verify-equivalence": _cmd_verify_equivalence,
    "sg-triviality": _cmd_sg_triviality,
}


def run(ws: Workspace, command: str, args: list, opts=None) -> tuple:
    """Execute ``command`` and return ``(report, exit_code)``."""
    opts = opts or build_parser().parse_args(["-", command])
    if command not in COMMANDS:
        raise CommandError(f"unknown command {command!r}; choose from {', '.join(sorted(COMMANDS))}")
    params = {"cat": opts.cat or ws.defaults.get("cat") or next(iter(ws.subcategories), None),
              "bound": ws.setting("bound", opts.bound),
              "depth": ws.setting("depth", opts.depth),
              "seed": ws.setting("seed", opts.seed)}
    c = ws.category(params["cat"])
    result, code = COMMANDS[command](ws, c, list(args), opts, params)
    report = {"schema": SCHEMA, "command": command, "args": list(args), "params": params,
              "exit_code": code, "result": result}
    return report, code


def render_text(report: dict) -> str:
    lines = [f"{report['command']} {' '.join(report['args'])}".rstrip()]
    lines.append("params: " + ", ".join(f"{k}={v}" for k, v in sorted(report["params"].items())))
    for key, value in report["result"].items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + json.dumps(row, sort_keys=True) for row in value)
        else:
            lines.append(f"{key}: {json.dumps(value, sort_keys=True) if not isinstance(value, str) else value}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relsing", description="Relative homological computations over quiver algebras.")
    ap.add_argument("workspace", help="workspace file (JSON syntax)")
    ap.add_argument("command", help="one of: " + ", ".join(sorted(COMMANDS)))
    ap.add_argument("args", nargs="*", help="object names or integers, depending on the command")
    ap.add_argument("--cat", help="subcategory name")
    ap.add_argument("--bound", type=int)
    ap.add_argument("--depth", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--shifts", help="shift range LO..HI or a comma list")
    ap.add_argument("--corpus", help="comma-separated module names")
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--out", help="write the certificate here (gp-membership/certify)")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let negative ranges such as "--shifts -2..2" through argparse
    for j, tok in enumerate(argv[:-1]):
        if tok == "--shifts":
            argv[j:j + 2] = [f"--shifts={argv[j + 1]}"]
            break
    opts = parser.parse_args(argv)
    try:
        ws = load(opts.workspace)
        report, code = run(ws, opts.command, opts.args, opts)
    except WorkspaceError as exc:
        where = f" (line {exc.line}, column {exc.column})" if exc.kind == "parse" else ""
        print(f"input error{where}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (resolve.CdimExceeded, singcat.RepresentativeError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return INCONCLUSIVE
    except (CommandError, OSError, singcat.PerpError, resolve.AdmissibilityError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    out = render_json(report) if opts.format == "json" else render_text(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
