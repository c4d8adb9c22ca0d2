"""Config-driven command line reports: CSV, JSON, and PNG figures.

Subcommands
-----------
verify          run every theorem section of a config against one shared
                corpus, write results.csv / results.json plus a ratio
                figure per section, and run the exact-inequality suite.
constant        empirical constants (max ratios) with grid-refinement
                replay, one row per section.
sweep           re-run one section while varying alpha or kappa.
hls             sharpness ladder for the bilinear form against the closed
                form constant.
list-theorems   print the registered ids with their hypothesis summaries.

Output is deterministic: rows are emitted in config order regardless of
--threads, floats are serialized with repr, and no timestamps are written.
The process exits 0 only when every expected refusal refused, every check
computed, and the exact suite reports no violations.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import matplotlib

matplotlib.use("Agg")

from .exponents import ExponentSet, theorem_ids, theorem_summary
from .grid import Ball, make_ball_family, make_corpus, make_domain, save_grid_function
from .hls import lieb_constant, sharpness_ladder
from .kernel import parse_kernel
from .verify import HypothesisError, check, estimate_constant, exact_inequality_suite

__all__ = ["main"]

_CSV_COLUMNS = (
    "theorem_id", "m", "n", "alpha", "s", "p_list", "kappa",
    "h", "lhs", "rhs", "ratio", "c_emp", "seed", "q",
)

_RUN_KEYS = {"n", "l", "g", "seed", "corpus_size", "stride"}
_SECTION_KEYS = {
    "m", "alpha", "s", "p_list", "kappa", "kernels",
    "p_outer", "r", "ball", "expect",
}


class ConfigError(Exception):
    pass


def _parse_floats(text: str) -> tuple:
    return tuple(float(tok) for tok in re.split(r"[;,]", text) if tok.strip())


def _load_config(path: str):
    cp = configparser.ConfigParser(delimiters=("=", ":"), inline_comment_prefixes=("#",))
    if not cp.read(path):
        raise ConfigError(f"cannot read config file {path!r}")
    if "run" not in cp:
        raise ConfigError("config needs a [run] section")
    for key in cp["run"]:
        if key not in _RUN_KEYS:
            raise ConfigError(f"unknown key '{key}' in section [run]")
    run = {
        "n": cp["run"].getint("n", 1),
        "L": cp["run"].getfloat("l", 4.0),
        "G": cp["run"].getint("g", 256),
        "seed": cp["run"].getint("seed", 7),
        "corpus_size": cp["run"].getint("corpus_size", 12),
        "stride": cp["run"].getint("stride", 4),
    }
    known = set(theorem_ids())
    sections = []
    for name in cp.sections():
        if name == "run":
            continue
        tid = name.split()[0]
        if tid not in known:
            raise ConfigError(f"section [{name}]: unknown theorem id {tid!r}")
        body = cp[name]
        for key in body:
            if key not in _SECTION_KEYS:
                raise ConfigError(f"unknown key '{key}' in section [{name}]")
        if "p_list" not in body or "alpha" not in body:
            raise ConfigError(f"section [{name}] needs alpha and p_list")
        p_list = _parse_floats(body["p_list"])
        spec = {
            "name": name,
            "tid": tid,
            "m": body.getint("m", len(p_list)),
            "alpha": body.getfloat("alpha"),
            "s": math.inf if body.get("s", "inf").strip() in ("inf", "oo") else body.getfloat("s"),
            "p_list": p_list,
            "kappa": body.getfloat("kappa", 0.0),
            "kernels": body.get("kernels", "").strip(),
            "p_outer": body.getfloat("p_outer", fallback=None),
            "r": body.getfloat("r", fallback=None),
            "ball": body.getfloat("ball", fallback=None),
            "expect": body.get("expect", "check").strip(),
        }
        if spec["expect"] not in ("check", "refusal"):
            raise ConfigError(f"section [{name}]: expect must be check or refusal")
        sections.append(spec)
    if not sections:
        raise ConfigError("config has no theorem sections")
    return run, sections


def _build_exps(spec, n: int) -> ExponentSet:
    return ExponentSet(
        m=spec["m"], n=n, alpha=spec["alpha"], s=spec["s"],
        p_list=spec["p_list"], kappa=spec["kappa"],
        p_outer=spec["p_outer"], r_explicit=spec["r"],
    )


def _build_kernels(spec, n: int):
    if not spec["kernels"]:
        return None
    return tuple(parse_kernel(n, d) for d in spec["kernels"].split(";") if d.strip())


def _needs_outer(tid: str) -> bool:
    return tid in ("6.3i", "6.3ii", "6.4", "6.6i", "6.6ii", "6.7")


def _run_section(spec, run, corpus, family):
    """Evaluate one config section; never raises, failures become records."""
    n = corpus.domain.n
    out = {
        "name": spec["name"], "theorem": spec["tid"], "expect": spec["expect"],
        "refused": False, "violated": [], "error": None,
        "rows": [], "c_emp": None, "refinement": [],
    }
    try:
        exps = _build_exps(spec, n)
        kernels = _build_kernels(spec, n)
        ball = None
        if spec["ball"] is not None:
            ball = Ball(center=(0.0,) * n, radius=spec["ball"])
        size = len(corpus.members)
        m = exps.m
        with_outer = _needs_outer(spec["tid"])
        results = []
        for j in range(size):
            fs = [corpus.members[(j + i) % size] for i in range(m)]
            ids = [corpus.labels[(j + i) % size] for i in range(m)]
            outer = None
            if with_outer:
                outer = corpus.members[(j + m) % size]
                ids.append(corpus.labels[(j + m) % size])
            results.append(check(
                spec["tid"], exps, fs, f_outer=outer, kernels=kernels,
                family=family, ball=ball, function_ids=tuple(ids),
            ))
        out["rows"] = results
        out["c_emp"] = max(r.ratio for r in results)
        out["exps"] = exps
    except HypothesisError as exc:
        out["refused"] = True
        out["violated"] = [name for name, _ in exc.violated]
        out["exps"] = _build_exps(spec, n)
    except (ValueError, KeyError) as exc:
        out["error"] = str(exc)
    return out


def _refine_section(spec, out, run, corpus, family):
    if out["refused"] or out["error"] or out["c_emp"] in (None, 0.0):
        return
    n = corpus.domain.n
    est = estimate_constant(
        spec["tid"], out["exps"], corpus,
        kernels=_build_kernels(spec, n), family=family,
        ball=Ball(center=(0.0,) * n, radius=spec["ball"]) if spec["ball"] is not None else None,
        refine=True,
    )
    out["refinement"] = list(est.refinement_ratios)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv_rows(spec, out, run):
    exps = out.get("exps")
    base = {
        "theorem_id": spec["name"],
        "m": spec["m"],
        "n": run["n"],
        "alpha": _fmt(float(spec["alpha"])),
        "s": _fmt(float(spec["s"])),
        "p_list": ";".join(format(p, "g") for p in spec["p_list"]),
        "kappa": _fmt(float(spec["kappa"])),
        "seed": run["seed"],
    }
    if out["refused"] or out["error"]:
        row = dict(base, h="", lhs="", rhs="", ratio="", c_emp="", q="")
        return [row]
    rows = []
    c_emp = out["c_emp"]
    for r in out["rows"]:
        rows.append(dict(
            base,
            h=_fmt(r.h), lhs=_fmt(r.lhs), rhs=_fmt(r.rhs_without_constant),
            ratio=_fmt(r.ratio), c_emp=_fmt(c_emp),
            q=_fmt(float(r.notes["q"])) if "q" in r.notes else "",
        ))
    return rows


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _json_section(out):
    body = {
        "name": out["name"], "theorem": out["theorem"], "expect": out["expect"],
        "refused": out["refused"], "violated": out["violated"],
        "error": out["error"], "c_emp": out["c_emp"],
        "refinement": out["refinement"],
        "rows": [
            {
                "function_ids": list(r.function_ids),
                "lhs": r.lhs, "rhs": r.rhs_without_constant,
                "ratio": r.ratio, "h": r.h,
                "notes": {k: v for k, v in sorted(r.notes.items())},
            }
            for r in out["rows"]
        ],
    }
    return body


def _plot_ratios(path, name, out):
    import matplotlib.pyplot as plt

    ratios = [r.ratio for r in out["rows"]]
    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    ax.plot(range(len(ratios)), ratios, "o", ms=4, color="#2c6fbb")
    ax.axhline(out["c_emp"], color="#bb2c2c", lw=1.0, ls="--",
               label=f"c_emp = {out['c_emp']:.5g}")
    ax.set_xlabel("corpus tuple index")
    ax.set_ylabel("lhs / rhs")
    ax.set_title(name)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)


def _suite_exponent_sets():
    return (
        ExponentSet(m=2, n=1, alpha=0.5, s=math.inf, p_list=(3.0, 3.0), kappa=0.2),
        ExponentSet(m=2, n=1, alpha=0.5, s=math.inf, p_list=(2.0, 2.0), kappa=0.0),
        ExponentSet(m=2, n=1, alpha=0.5, s=math.inf, p_list=(4.0, 2.5), kappa=0.35),
    )


def _cmd_verify(args) -> int:
    run, sections = _load_config(args.config)
    if args.seed is not None:
        run["seed"] = args.seed
    os.makedirs(args.out, exist_ok=True)
    domain = make_domain(run["n"], run["L"], run["G"])
    corpus = make_corpus(domain, run["seed"], run["corpus_size"])
    family = make_ball_family(domain, center_stride=run["stride"])

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        outs = list(pool.map(lambda s: _run_section(s, run, corpus, family), sections))
    if args.refine:
        for spec, out in zip(sections, outs):
            _refine_section(spec, out, run, corpus, family)

    suite = exact_inequality_suite(corpus, family, _suite_exponent_sets())
    suite_failures = [row for row in suite if not row["ok"]]

    all_rows = []
    failures = []
    warnings = []
    for spec, out in zip(sections, outs):
        all_rows.extend(_csv_rows(spec, out, run))
        if out["error"]:
            failures.append(f"[{spec['name']}] error: {out['error']}")
        elif spec["expect"] == "refusal" and not out["refused"]:
            failures.append(f"[{spec['name']}] expected refusal but check ran")
        elif spec["expect"] == "check" and out["refused"]:
            failures.append(
                f"[{spec['name']}] unexpected refusal: {', '.join(out['violated'])}"
            )
        if len(out["refinement"]) == 2 and out["refinement"][0] > 0:
            drift = out["refinement"][1] / out["refinement"][0]
            if not 0.9 <= drift <= 1.1:
                warnings.append(
                    f"[{spec['name']}] refinement drift {drift:.3f} outside [0.9, 1.1]"
                )
    if suite_failures:
        failures.append(
            f"exact suite: {len(suite_failures)} violation(s), first: "
            f"{suite_failures[0]['name']} on {suite_failures[0]['pair']}"
        )

    _write_csv(os.path.join(args.out, "report.csv"), all_rows)
    dump_dir = os.path.join(args.out, "corpus")
    os.makedirs(dump_dir, exist_ok=True)
    for label, member in zip(corpus.labels, corpus.members):
        fname = label.replace(":", "-") + ".mfl"
        save_grid_function(member, os.path.join(dump_dir, fname))
    report = {
        "metadata": {
            "n": run["n"], "L": run["L"], "G": run["G"], "seed": run["seed"],
            "corpus_size": run["corpus_size"], "stride": run["stride"],
        },
        "sections": [_json_section(o) for o in outs],
        "exact_suite": {
            "rows": len(suite),
            "failures": len(suite_failures),
            "failing": [f"{r['name']}:{r['pair']}" for r in suite_failures[:8]],
        },
        "failures": failures,
        "warnings": warnings,
    }
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for spec, out in zip(sections, outs):
        if out["rows"]:
            fname = "ratios_" + spec["name"].replace(" ", "-") + ".png"
            _plot_ratios(os.path.join(args.out, fname), spec["name"], out)

    for line in warnings:
        print("warning:", line, file=sys.stderr)
    for line in failures:
        print("failure:", line, file=sys.stderr)
    print(f"wrote {len(all_rows)} rows to {os.path.join(args.out, 'report.csv')}")
    return 1 if failures else 0


def _cmd_constant(args) -> int:
    run, sections = _load_config(args.config)
    if args.seed is not None:
        run["seed"] = args.seed
    os.makedirs(args.out, exist_ok=True)
    domain = make_domain(run["n"], run["L"], run["G"])
    corpus = make_corpus(domain, run["seed"], run["corpus_size"])
    family = make_ball_family(domain, center_stride=run["stride"])
    rows = []
    report = []
    failures = []
    for spec in sections:
        if spec["expect"] == "refusal":
            continue
        try:
            exps = _build_exps(spec, run["n"])
            est = estimate_constant(
                spec["tid"], exps, corpus,
                kernels=_build_kernels(spec, run["n"]), family=family,
                ball=Ball(center=(0.0,) * run["n"], radius=spec["ball"])
                if spec["ball"] is not None else None,
                refine=args.refine,
            )
        except (HypothesisError, ValueError, KeyError) as exc:
            failures.append(f"[{spec['name']}] {exc}")
            continue
        rows.append({
            "theorem_id": spec["name"], "m": spec["m"], "n": run["n"],
            "alpha": _fmt(float(spec["alpha"])), "s": _fmt(float(spec["s"])),
            "p_list": ";".join(format(p, "g") for p in spec["p_list"]),
            "kappa": _fmt(float(spec["kappa"])), "h": _fmt(domain.spacing),
            "lhs": "", "rhs": "", "ratio": _fmt(est.c_emp),
            "c_emp": _fmt(est.c_emp), "seed": run["seed"],
            "q": _fmt(float(est.notes["q"])) if "q" in est.notes else "",
        })
        report.append({
            "name": spec["name"], "c_emp": est.c_emp,
            "argmax_ids": list(est.argmax_ids),
            "refinement": list(est.refinement_ratios),
        })
    _write_csv(os.path.join(args.out, "constants.csv"), rows)
    with open(os.path.join(args.out, "constants.json"), "w") as fh:
        json.dump({"constants": report, "failures": failures}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for line in failures:
        print("failure:", line, file=sys.stderr)
    print(f"wrote {len(rows)} constants to {os.path.join(args.out, 'constants.csv')}")
    return 1 if failures else 0


def _cmd_sweep(args) -> int:
    run, sections = _load_config(args.config)
    if args.seed is not None:
        run["seed"] = args.seed
    spec = next((s for s in sections if s["name"] == args.theorem), None)
    if spec is None:
        print(f"failure: no section [{args.theorem}] in config", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    domain = make_domain(run["n"], run["L"], run["G"])
    corpus = make_corpus(domain, run["seed"], run["corpus_size"])
    family = make_ball_family(domain, center_stride=run["stride"])
    values = _parse_floats(args.values)
    rows = []
    points = []
    for v in values:
        sv = dict(spec)
        sv[args.param] = v
        out = _run_section(sv, run, corpus, family)
        rows.extend(_csv_rows(sv, out, run))
        points.append((v, out["c_emp"]))
    _write_csv(os.path.join(args.out, "sweep.csv"), rows)

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    xs = [v for v, c in points if c is not None]
    ys = [c for _, c in points if c is not None]
    ax.plot(xs, ys, "o-", color="#2c6fbb")
    ax.set_xlabel(args.param)
    ax.set_ylabel("c_emp")
    ax.set_title(f"{spec['name']}: empirical constant vs {args.param}")
    fig.tight_layout()
    fname = f"sweep_{args.param}.png"
    fig.savefig(os.path.join(args.out, fname), dpi=110, metadata={"Software": None})
    plt.close(fig)
    skipped = sum(1 for _, c in points if c is None)
    print(f"swept {len(values)} values ({skipped} refused) -> {fname}")
    return 0


def _cmd_hls(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    steps = [(args.box, args.grid * 2 ** k) for k in range(args.steps)]
    ratios = sharpness_ladder(args.n, args.lam, steps)
    constant = lieb_constant(args.n, args.lam)
    with open(os.path.join(args.out, "hls_ladder.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "L", "G", "ratio", "constant"])
        for k, ((L, G), ratio) in enumerate(zip(steps, ratios)):
            writer.writerow([k, _fmt(float(L)), G, _fmt(ratio), _fmt(constant)])
    with open(os.path.join(args.out, "hls.json"), "w") as fh:
        json.dump({
            "n": args.n, "lambda": args.lam, "constant": constant,
            "steps": [list(s) for s in steps], "ratios": list(ratios),
        }, fh, indent=2, sort_keys=True)
        fh.write("\n")

    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    ax.plot(range(len(ratios)), ratios, "o-", color="#2c6fbb", label="discrete ratio")
    ax.axhline(constant, color="#bb2c2c", lw=1.0, ls="--",
               label=f"closed form = {constant:.6g}")
    ax.set_xlabel("refinement step")
    ax.set_ylabel("B(u,u) / ||u||_p^2")
    ax.set_title(f"sharpness ladder, n={args.n}, lambda={args.lam}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(args.out, "hls_ladder.png"), dpi=110,
                metadata={"Software": None})
    plt.close(fig)
    gap = 100.0 * (1.0 - ratios[-1] / constant)
    print(f"final ratio {ratios[-1]!r} vs constant {constant!r} (gap {gap:.3f}%)")
    return 0


def _cmd_list(args) -> int:
    for tid in theorem_ids():
        print(f"{tid:6s} {theorem_summary(tid)}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mfl",
        description="numerical checks for multilinear fractional operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run all config sections and the exact suite")
    pv.add_argument("--config", required=True)
    pv.add_argument("--out", default="mfl-report")
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--threads", type=int, default=1)
    pv.add_argument("--refine", action="store_true",
                    help="replay each argmax on a doubled grid")
    pv.set_defaults(func=_cmd_verify)

    pc = sub.add_parser("constant", help="empirical constants per section")
    pc.add_argument("--config", required=True)
    pc.add_argument("--out", default="mfl-report")
    pc.add_argument("--seed", type=int, default=None)
    pc.add_argument("--refine", action="store_true")
    pc.set_defaults(func=_cmd_constant)

    ps = sub.add_parser("sweep", help="vary one exponent of one section")
    ps.add_argument("--config", required=True)
    ps.add_argument("--theorem", required=True, help="section name to sweep")
    ps.add_argument("--param", choices=("alpha", "kappa"), required=True)
    ps.add_argument("--values", required=True, help="comma separated values")
    ps.add_argument("--out", default="mfl-report")
    ps.add_argument("--seed", type=int, default=None)
    ps.set_defaults(func=_cmd_sweep)

    ph = sub.add_parser("hls", help="bilinear form sharpness ladder")
    ph.add_argument("--n", type=int, default=1, choices=(1, 2))
    ph.add_argument("--lam", type=float, default=0.5)
    ph.add_argument("--box", type=float, default=50.0, help="box half width L")
    ph.add_argument("--grid", type=int, default=1024, help="base G, doubled per step")
    ph.add_argument("--steps", type=int, default=3)
    ph.add_argument("--out", default="mfl-report")
    ph.set_defaults(func=_cmd_hls)

    pl = sub.add_parser("list-theorems", help="registered ids and hypotheses")
    pl.set_defaults(func=_cmd_list)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
