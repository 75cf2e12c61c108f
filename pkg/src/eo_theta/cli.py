"""``eo-theta`` command line front end.

Exit codes: 0 success, 2 schema or configuration error, 3 verification
failure.  JSON reports carry ``version``, ``seed``, ``grid`` and
``timing``; everything except ``timing`` is reproducible byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import itertools
import sys
import time

import numpy as np

from . import dieudonne as dd
from . import filtcalc as fc
from . import io
from . import suites
from . import thetaform as th
from . import weylcomb as wc
from .config import ConfigError, RunConfig, budgets, parse_int_list
from .field import GF, FieldError

EXIT_OK, EXIT_CONFIG, EXIT_FAIL = 0, 2, 3


class VerificationFailure(Exception):
    def __init__(self, report, message):
        super().__init__(message)
        self.report = report


# ------------------------------------------------------------------ output

def _fmt_tuple(x):
    return "" if x is None else "(" + ",".join(str(v) for v in x) + ")"


def _csv(rows, columns):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    return buf.getvalue()


def _pretty(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        out = []
        for v in obj:
            if isinstance(v, dict) and v:
                text = _pretty(v, indent + 1)
                out.append(pad + "- " + text[len(pad) + 2:])
            else:
                out.append(f"{pad}- {_inline(v)}")
        return "\n".join(out)
    return pad + _inline(obj)


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in items)


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    return str(v)


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(cfg, result, started, extra_timing=None):
    timing = {"seconds": round(time.perf_counter() - started, 4)}
    if extra_timing:
        timing.update(extra_timing)
    env = io.envelope(cfg.command, cfg.seed, cfg.grid(), result, timing)
    if cfg.fmt == "pretty":
        return _pretty(io.strip_timing(env)) + "\n"
    return io.dumps(env)


# ---------------------------------------------------------------- commands

STRATA_COLUMNS = ["n", "p", "r", "w_r", "length", "p_rank_total", "p_rank_sigmabar",
                  "delta", "hasse_weight", "lambda_shift", "closure"]


def cmd_strata(cfg):
    cfg.check("comb")
    started = time.perf_counter()
    rows = []
    for n, p in itertools.product(cfg.n, cfg.p):
        for row in wc.strata_rows(n, p):
            rows.append({"n": n, "p": p, **row})
    if cfg.fmt == "csv":
        flat = [{**row, "w_r": " ".join(map(str, row["w_r"])),
                 "delta": _fmt_tuple(row["delta"]), "hasse_weight": _fmt_tuple(row["hasse_weight"]),
                 "lambda_shift": _fmt_tuple(row["lambda_shift"]),
                 "closure": " > ".join("".join(map(str, w)) for w in row["closure"])}
                for row in rows]
        return _csv(flat, STRATA_COLUMNS)
    return _report(cfg, {"rows": rows}, started)


def _load_module(path):
    obj = io.read_json(path, "module")
    try:
        D = dd.module_from_json(obj)
    except (dd.ModuleError, FieldError, ValueError) as exc:
        raise io.SchemaError(f"{path}: {exc}") from None
    if D.n > budgets()["module"]:
        raise ConfigError(f"n={D.n} exceeds the module budget {budgets()['module']}")
    return D


def cmd_classify(cfg):
    started = time.perf_counter()
    D = _load_module(cfg.inp)
    cfg.n, cfg.p, cfg.ext_degree = [D.n], [D.field.p], D.field.k
    bt1 = dd.verify_bt1(D)
    result = {"file": str(cfg.inp), "bt1": bt1.as_dict()}
    if not bt1.ok:
        raise VerificationFailure(_report(cfg, result, started), f"BT_1 check failed: {bt1.failure}")
    try:
        result["class"] = dd.eo_class(D).as_dict()
        result["filtration"] = dd.canonical_filtration(D).as_dict()
    except dd.ModuleError as exc:
        result["error"] = str(exc)
        raise VerificationFailure(_report(cfg, result, started), str(exc)) from None
    result["delta_torsion_ranks"] = list(dd.delta_torsion_ranks(D))
    return _report(cfg, result, started)


def _filt_default_specs(ns):
    specs = []
    for m in ns:
        specs.append({"kind": "tensor", "A": [m, m - 1, 0], "B": [2, 1, 0]})
        specs.append({"kind": "dual", "A": [m, m - 1, 1, 0]})
        for j in range(m + 1):
            specs.append({"kind": "koszul", "dim": m, "sub": 1, "j": j})
        for j in range(4):
            specs.append({"kind": "sym", "A": [m, 1, 0], "j": j})
    return specs


def _strip(dims):
    return suites._strip(dims)


def _filt_row(F, spec, rng):
    kind = spec["kind"]

    def filt(key):
        dims = spec.get(key)
        if not dims:
            raise ConfigError(f"{kind} spec needs {key!r}")
        if any(a < b for a, b in zip(dims, dims[1:])):
            raise ConfigError(f"{key}={dims} is not non-increasing")
        return fc.FilteredModule.random(F, list(dims), rng)

    if kind == "tensor":
        A, B = filt("A"), filt("B")
        got = fc.tensor_filtration(A, B).graded_dims()
        want = fc.tensor_graded_formula(A.graded_dims(), B.graded_dims())
    elif kind == "dual":
        A = filt("A")
        got = fc.dual_filtration(A).graded_dims()
        want = A.graded_dims()[::-1]
    elif kind == "koszul":
        m, d, j = spec.get("dim"), spec.get("sub"), spec.get("j")
        if m is None or d is None or j is None or not (d <= m and j <= m):
            raise ConfigError(f"koszul spec needs sub <= dim and j <= dim: {spec}")
        g = fc.FilteredModule.random(F, [m], rng).steps[0]
        got = fc.koszul_filtration(F, g[:d], m, j).graded_dims()
        want = fc.koszul_graded_formula(m, d, j)
    else:
        A, j = filt("A"), spec.get("j")
        if j is None:
            raise ConfigError("sym spec needs 'j'")
        got = fc.sym_filtration(A, j).graded_dims()
        want = fc.sym_graded_formula(A.graded_dims(), j)
    return {"spec": spec, "graded_dims": got, "predicted": want, "total": sum(got),
            "match": _strip(got) == _strip(want)}


def cmd_filt_dims(cfg):
    started = time.perf_counter()
    if cfg.inp:
        obj = io.read_json(cfg.inp, "filtspec")
        p, k, specs = obj.get("p", cfg.p[0]), obj.get("k", cfg.ext_degree), obj["specs"]
        cfg.p, cfg.ext_degree = [p], k
    else:
        cfg.check("module")
        p, k, specs = cfg.p[0], cfg.ext_degree, _filt_default_specs(cfg.n)
    try:
        F = GF(p, k)
    except FieldError as exc:
        raise ConfigError(str(exc)) from None
    rng = np.random.default_rng(cfg.seed)
    rows = [_filt_row(F, spec, rng) for spec in specs]
    result = {"q": F.q, "rows": rows, "all_match": all(r["match"] for r in rows)}
    text = _report(cfg, result, started)
    if not result["all_match"]:
        bad = next(r["spec"] for r in rows if not r["match"])
        raise VerificationFailure(text, f"graded dimensions disagree for {bad}")
    return text


def theta_cell(n, r, p, N, seed, negative_control=False, ext_degree=1):
    """Full identity suite on the plain and a twisted model of one grid cell."""
    rng = np.random.default_rng([seed, n, r, p, N])
    plain = th.formal_model(n, r, p, N, ext_degree=ext_degree)
    c, noise = th.random_twist(n, r, p, rng, N, ext_degree=ext_degree)
    twisted = th.formal_model(n, r, p, N, ext_degree=ext_degree, c=c, noise=noise)
    checks = {}
    checks["horizontal"] = not th.horizontality_defect(plain) and not th.horizontality_defect(twisted)
    checks["flat"] = not th.curvature(plain)
    checks["theta_kills_hasse"] = all(th.theta(M, th.hasse_form(M)).truncate(N - 1).is_zero()
                                      for M in (plain, twisted))
    deg = min(2, N - 1)
    secs = th.monomial_sections(twisted, deg)
    images = [th.theta(twisted, s) for s in secs]
    leibniz = additive = True
    for i, j in itertools.combinations_with_replacement(range(len(secs)), 2):
        f, g = secs[i], secs[j]
        leibniz &= th.theta(twisted, f * g).eq_upto(f * images[j] + images[i] * g, N - 1)
        if f.weight == g.weight:
            additive &= th.theta(twisted, f + g).eq_upto(images[i] + images[j], N - 1)
    checks["leibniz"], checks["additive"] = bool(leibniz), bool(additive)
    checks["weight_shift"] = all(
        img.k == tuple(a + b for a, b in zip(s.k, wc.delta_shift(r, p, n))) and img.w == s.w - 1
        for s, img in zip(secs, images))
    checks["no_denominators"] = all(
        th.unit_root_projection(twisted, k).is_polynomial()
        for k in suites.dominant_weights(n - 1, 2))
    dual = th.dual_route_check(twisted)
    checks["dual_route"] = dual is not False
    if r == 1:
        checks["frobenius_kill"] = th.frobenius_kill_check(twisted)["ok"]
    cell = {"n": n, "r": r, "p": p, "trunc": N, "sections": len(secs),
            "pairs": len(secs) * (len(secs) + 1) // 2, "checks": checks,
            "hasse": plain.ring.to_json(plain.hasse()),
            "ok": all(checks.values())}
    if negative_control and r == 1:
        bad = th.frobenius_kill_check(th.perturbed_model(plain))
        cell["negative_control"] = {"frobenius_kill": bad["ok"], "expected_fail": not bad["ok"]}
        cell["ok"] = cell["ok"] and not bad["ok"]
    return cell


def cmd_theta_check(cfg):
    cfg.check("theta")
    started = time.perf_counter()
    cells = []
    for n, p in itertools.product(cfg.n, cfg.p):
        rs = [r for r in (cfg.r or range(1, n)) if 1 <= r <= n - 1]
        if not rs:
            raise ConfigError(f"no valid r for n={n}")
        for r in rs:
            cells.append(theta_cell(n, r, p, cfg.trunc, cfg.seed, cfg.negative_control, cfg.ext_degree))
    result = {"cells": cells, "passed": all(c["ok"] for c in cells)}
    text = _report(cfg, result, started)
    if not result["passed"]:
        bad = next(c for c in cells if not c["ok"])
        failed = [k for k, v in bad["checks"].items() if not v] or ["negative_control"]
        raise VerificationFailure(text, f"n={bad['n']} r={bad['r']} p={bad['p']}: {', '.join(failed)}")
    return text


def _model_from_json(obj, cfg):
    try:
        M = th.formal_model(obj["n"], obj["r"], obj["p"], obj.get("trunc", cfg.trunc),
                            ext_degree=obj.get("k", 1), c=obj.get("c"))
    except (th.ModelError, FieldError, ValueError) as exc:
        raise io.SchemaError(f"model: {exc}") from None
    if M.n > budgets()["theta"]:
        raise ConfigError(f"n={M.n} exceeds the theta budget {budgets()['theta']}")
    return M


def cmd_theta_apply(cfg):
    started = time.perf_counter()
    obj = io.read_json(cfg.inp, "section")
    M = _model_from_json(obj["model"], cfg)
    cfg.n, cfg.p, cfg.ext_degree, cfg.trunc = [M.n], [M.p], M.field.k, M.ring.cutoff
    try:
        s = th.Section.from_json(M.ring, M.n, obj["section"])
    except (th.SectionError, ValueError) as exc:
        raise io.SchemaError(f"section: {exc}") from None
    image = th.theta(M, s).truncate(M.ring.cutoff - 1)
    result = {"model": th.model_summary(M), "input": s.to_json(), "image": image.to_json(),
              "valid_degree": M.ring.cutoff - 1}
    return _report(cfg, result, started)


def cmd_verify_all(cfg):
    started = time.perf_counter()
    from . import kernels
    kernels.warmup()
    results = suites.run_all(seed=cfg.seed, negative_control=cfg.negative_control, only=cfg.only)
    payload = {"suites": [r.as_dict() for r in results],
               "passed": all(r.passed for r in results),
               "checked": sum(r.checked for r in results)}
    timing = {"suites": {r.name: round(r.seconds, 4) for r in results}}
    text = _report(cfg, payload, started, timing)
    if not payload["passed"]:
        bad = next(r for r in results if not r.passed)
        raise VerificationFailure(text, f"suite {bad.name} failed: {bad.failures[0]}")
    return text


# ------------------------------------------------------------------ parser

COMMANDS = {
    "strata": (cmd_strata, "csv"),
    "classify": (cmd_classify, "json"),
    "filt-dims": (cmd_filt_dims, "json"),
    "theta-check": (cmd_theta_check, "json"),
    "theta-apply": (cmd_theta_apply, "json"),
    "verify-all": (cmd_verify_all, "json"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", default="3", help="rank n: '3', '3-8' or '3,5'")
    common.add_argument("--p", default="2", help="primes: '2' or '2,3,5'")
    common.add_argument("--ext-degree", type=int, default=1, help="degree k of F_q over F_p")
    common.add_argument("--trunc", type=int, default=3, help="truncation order N of formal models")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="eo-theta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("strata", parents=[common], help="EO strata table")
    p = sub.add_parser("classify", parents=[common], help="classify a module JSON file")
    p.add_argument("file")
    p = sub.add_parser("filt-dims", parents=[common], help="graded dimensions of filtrations")
    p.add_argument("file", nargs="?")
    p = sub.add_parser("theta-check", parents=[common], help="identity suite on formal models")
    p.add_argument("--r", default=None, help="strata to check (default: all)")
    p.add_argument("--negative-control", action="store_true")
    p = sub.add_parser("theta-apply", parents=[common], help="apply theta to a section JSON file")
    p.add_argument("file")
    p = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    p.add_argument("--negative-control", action="store_true")
    p.add_argument("--only", default=None, help="comma-separated suite names")
    return parser


def config_from_args(args):
    cfg = RunConfig(args.command, parse_int_list(args.n), parse_int_list(args.p), args.ext_degree,
                    args.trunc, args.seed, args.format or COMMANDS[args.command][1],
                    getattr(args, "file", None), args.out)
    if cfg.fmt == "csv" and cfg.command != "strata":
        raise ConfigError("csv output is only available for strata")
    r = getattr(args, "r", None)
    cfg.r = parse_int_list(r) if r else None
    cfg.negative_control = getattr(args, "negative_control", False)
    only = getattr(args, "only", None)
    cfg.only = [s.strip() for s in only.split(",")] if only else None
    if cfg.only:
        unknown = sorted(set(cfg.only) - set(suites.SUITES))
        if unknown:
            raise ConfigError(f"unknown suites: {unknown}")
    if cfg.command in ("strata", "theta-check"):
        from .field import is_prime
        if not all(is_prime(q) for q in cfg.p):
            raise ConfigError(f"not prime: {cfg.p}")
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        budgets()
        cfg = config_from_args(args)
        text = COMMANDS[cfg.command][0](cfg)
    except (ConfigError, io.SchemaError) as exc:
        print(f"eo-theta: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VerificationFailure as exc:
        _emit(cfg, exc.report)
        print(f"eo-theta: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(cfg, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
