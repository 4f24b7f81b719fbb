"""Command-line interface.

Exit codes:

    0  success
    1  usage or parse error (bad flag, malformed value, bad config file)
    2  geometry or computation error (arc leaves the domain, parameter
       outside the validity gate, singular system, disconnected graph,
       iteration stopped early)
    3  verification failure (``verify`` found a mismatch)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__, svg
from .config import ConfigError, DEFAULTS, load_config, merge
from .errors import DomainError, RatioCutError
from .geometry import PARAM_NAMES, CutParams, DomainParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 2
EXIT_VERIFY = 3

FORMATS = ("csv", "json", "svg", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so every parse failure maps to exit code 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _formats(fmt: str) -> tuple:
    return ("csv", "json", "svg") if fmt == "all" else (fmt,)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--seed", type=int, metavar="U64")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--gate", type=float, help="validity gate on max |sigma| (default 0.25)")
    p.add_argument("--extend-gate", dest="extend_gate", type=float, metavar="FLOAT",
                   help="raise the validity gate to this value")


def _add_sigma(p):
    g = p.add_argument_group("domain parameters")
    for n in PARAM_NAMES:
        g.add_argument(f"--{n}", type=float, default=0.0)
    g.add_argument("--sigma", metavar="LIST", help="comma separated name=value pairs (overrides single flags)")


def _add_cut(p):
    g = p.add_argument_group("cut")
    g.add_argument("--q", type=float, default=0.5)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--theta", type=float, default=0.0)


def _sigma_from(args) -> DomainParams:
    vals = {n: getattr(args, n) for n in PARAM_NAMES}
    if args.sigma:
        for item in args.sigma.split(","):
            if not item.strip():
                continue
            if "=" not in item:
                raise UsageError(f"malformed sigma entry {item!r}; expected name=value")
            k, v = (s.strip() for s in item.split("=", 1))
            if k not in PARAM_NAMES:
                raise UsageError(f"unknown parameter {k!r}")
            try:
                vals[k] = float(v)
            except ValueError as exc:
                raise UsageError(f"bad value for {k}: {v!r}") from exc
    return DomainParams(**vals)


def _settings(args) -> dict:
    cfg = load_config(args.config)
    over = {k: getattr(args, k, None) for k in DEFAULTS}
    cfg = merge(cfg, over)
    if cfg["format"] not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    if cfg.get("extend_gate") is not None:
        cfg["gate"] = max(cfg["gate"], cfg["extend_gate"])
    return cfg


def _parse_link(text: str):
    if "=" not in text:
        raise UsageError(f"malformed link {text!r}; expected name=ratio")
    k, v = (s.strip() for s in text.split("=", 1))
    if k not in PARAM_NAMES:
        raise UsageError(f"unknown parameter {k!r}")
    try:
        return k, Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"link ratio must be an exact rational, got {v!r}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_eval(args, cfg, out):
    from .functional import ratio_cut

    s = _sigma_from(args)
    br = ratio_cut(s, CutParams(args.q, args.p, args.theta), normalized=args.normalized, gate=cfg["gate"])
    out.write(_dumps(br.to_dict()) + "\n")
    return EXIT_OK


def cmd_optimize(args, cfg, out):
    from .optimize import optimize_cut

    s = _sigma_from(args)
    rep = optimize_cut(s, normalized=args.normalized, gate=cfg["gate"])
    out.write(_dumps(rep.to_dict()) + "\n")
    return EXIT_OK


def cmd_predict(args, cfg, out):
    from .functional import ratio_cut
    from .perturbation.expansion import predict_cut

    s = _sigma_from(args)
    order = args.order or cfg["order"]
    cut = predict_cut(s, order=order, table=args.table, gate=cfg["gate"])
    doc = {"cut": {"q": cut.q, "p": cut.p, "theta": cut.theta}, "order": order}
    try:
        doc["value"] = ratio_cut(s, cut, gate=cfg["gate"]).value
    except RatioCutError as exc:
        doc["value"] = None
        doc["note"] = f"ratio cut undefined at the predicted cut: {exc}"
    out.write(_dumps(doc) + "\n")
    return EXIT_OK


def cmd_sweep(args, cfg, out):
    from .sweep import FAMILIES, SweepSpec, run_sweep, write_sweep

    count = cfg["count"]
    if args.param:
        if args.lo is None or args.hi is None:
            raise UsageError("--param needs --lo and --hi")
        links = tuple(_parse_link(t) for t in args.link or ())
        try:
            specs = [SweepSpec(args.param, args.lo, args.hi, count, links=links, name=args.name or args.param)]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        names = list(FAMILIES) if args.family in (None, "all") else [args.family]
        specs = []
        for n in names:
            base = FAMILIES[n]
            specs.append(SweepSpec(base.param, base.lo, base.hi, count, base.links, base.fixed, base.name))
    os.makedirs(cfg["out"], exist_ok=True)
    fmts = _formats(cfg["format"])
    summary = []
    for spec in specs:
        res = run_sweep(spec, gate=cfg["gate"], order=cfg["order"], workers=cfg["workers"])
        written = write_sweep(res, cfg["out"], [f for f in fmts if f in ("csv", "svg")])
        info = {
            "family": spec.name or spec.param,
            "samples": len(res.rows),
            "ok": len(res.ok_rows),
            "gated": sum(r.status == "gate" for r in res.rows),
            "failed": sum(r.status.startswith("error") for r in res.rows),
            "origin_error": res.origin_error(),
            "monotone_violations": res.monotone_violations(),
            "files": [os.path.basename(w) for w in written],
        }
        if "json" in fmts:
            path = os.path.join(cfg["out"], f"sweep_{spec.name or spec.param}.json")
            rows = [dict(zip(("param", "rc_opt", "rc_approx", "abs_err", "q_opt", "p_opt", "theta_opt",
                              "q_pred", "p_pred", "theta_pred", "status"), r.as_list())) for r in res.rows]
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(_dumps({"summary": {k: v for k, v in info.items() if k != "files"}, "rows": rows}) + "\n")
            info["files"].append(os.path.basename(path))
        summary.append(info)
    out.write(_dumps(summary) + "\n")
    return EXIT_OK


def cmd_verify(args, cfg, out):
    from .perturbation.coefficients import get_table, load_json
    from .verify import run_verification

    if args.table:
        # a table file carrying an errata list is audited with the corrections applied
        try:
            table = load_json(args.table, apply_errata=True)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot load coefficient table {args.table!r}: {exc}") from exc
    else:
        table = get_table("corrected")
    rep = run_verification(table, quick=args.quick)
    out.write(rep.summary() + "\n")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def _start_quad(args, cfg):
    from .dynamics import CurvilinearQuad, isosceles_right_triangle

    if args.start == "rectangle":
        return CurvilinearQuad.rectangle(cfg["width"], cfg["height"])
    if args.start == "triangle":
        return isosceles_right_triangle()
    s = _sigma_from(args)
    if s.A_WL or s.A_WR:
        raise UsageError("trajectory starts need zero wing areas")
    return CurvilinearQuad.from_sigma(s.check_gate(cfg["gate"]))


def trajectory_filmstrip(traj, title=""):
    frames = []
    for r in traj.records:
        cut = r.quad.domain().cut_arc(r.cut)
        frames.append((r.quad.sides, cut, f"step {r.step}: theta {r.theta:.4f}"))
    return svg.filmstrip(frames, title)


def cmd_iterate(args, cfg, out):
    from .dynamics import POLICIES, iterate

    policy = cfg["policy"]
    if policy not in POLICIES:
        raise ConfigError(f"policy must be one of {POLICIES}")
    Q0 = _start_quad(args, cfg)
    traj = iterate(Q0, cfg["steps"], side_policy=policy, gate=cfg["gate"], iq_gate=cfg["iq_gate"])
    os.makedirs(cfg["out"], exist_ok=True)
    fmts = _formats(cfg["format"])
    stem = os.path.join(cfg["out"], f"trajectory_{args.start}")
    files = []
    if "json" in fmts or "csv" in fmts:
        traj.write_jsonl(stem + ".jsonl")
        files.append(stem + ".jsonl")
    if "svg" in fmts and traj.records:
        trajectory_filmstrip(traj, f"{args.start}, policy {policy}").write(stem + ".svg")
        files.append(stem + ".svg")
    summary = {
        "steps": len(traj),
        "theta": traj.column("theta"),
        "bulge": traj.column("bulge"),
        "stopped": traj.stopped,
        "files": [os.path.basename(f) for f in files],
    }
    out.write(_dumps(summary) + "\n")
    if traj.stopped:
        sys.stderr.write(f"iteration stopped at {traj.stopped}\n")
        return EXIT_COMPUTE
    return EXIT_OK


def cmd_graphcut(args, cfg, out):
    from . import graphlap

    if args.domain == "rectangle":
        domain = graphlap.rectangle_polygon(cfg["width"], cfg["height"])
    else:
        from .functional import Domain

        domain = Domain.from_sigma(_sigma_from(args).check_gate(cfg["gate"]))
    cloud = graphlap.sample_domain(domain, cfg["n_points"], seed=cfg["seed"])
    G = graphlap.affinity_graph(cloud.points, k=cfg["knn"], bandwidth=cfg["bandwidth"], radius=cfg["radius"])
    res = graphlap.inverse_power_method(G.weights, starts=cfg["starts"], seed=cfg["seed"])
    pos, neg = graphlap.bipartition(res.f)
    mask = np.zeros(len(cloud), dtype=bool)
    mask[pos] = True
    os.makedirs(cfg["out"], exist_ok=True)
    fmts = _formats(cfg["format"])
    stem = os.path.join(cfg["out"], "graphcut")
    files = []
    if "csv" in fmts:
        graphlap.write_partition_csv(stem + "_partition.csv", cloud.points, res.f)
        graphlap.write_edges_csv(stem + "_edges.csv", G.weights)
        files += [stem + "_partition.csv", stem + "_edges.csv"]
    if "svg" in fmts:
        sides = np.where(mask, 1, -1)
        svg.scatter_partition(cloud.points, sides, f"graph ratio cut, N={len(cloud)}").write(stem + ".svg")
        files.append(stem + ".svg")
    summary = {
        "n": len(cloud),
        "seed": cfg["seed"],
        "value": res.value,
        "ratio_cut": graphlap.ratio_cut_value(G.weights, mask),
        "sizes": [len(pos), len(neg)],
        "interface_x": graphlap.interface_position(cloud.points, G.weights, res.f),
        "converged": res.converged,
        "files": [os.path.basename(f) for f in files],
    }
    if "json" in fmts:
        with open(stem + ".json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dumps({k: v for k, v in summary.items() if k != "files"}) + "\n")
        summary["files"].append(os.path.basename(stem + ".json"))
    out.write(_dumps(summary) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ratiocut", description="Ratio cuts of nearly rectangular domains.")
    parser.add_argument("--version", action="version", version=f"ratiocut {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("eval", help="ratio cut of one cut")
    _add_common(p)
    _add_sigma(p)
    _add_cut(p)
    p.add_argument("--normalized", action="store_true", help="multiply by the total area")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="numerically optimal cut")
    _add_common(p)
    _add_sigma(p)
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("predict", help="series predictor of the optimal cut")
    _add_common(p)
    _add_sigma(p)
    p.add_argument("--order", choices=("first", "full"))
    p.add_argument("--table", choices=("corrected", "printed"), default="corrected")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sweep", help="optimal versus predicted ratio cut along a parameter family")
    _add_common(p)
    p.add_argument("--family", help="named family or 'all' (default)")
    p.add_argument("--param", choices=PARAM_NAMES, help="custom sweep parameter")
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--link", action="append", metavar="NAME=RATIO", help="tie NAME to RATIO * param")
    p.add_argument("--name")
    p.add_argument("--workers", type=int, help="worker processes for sweep samples (default 1)")
    p.add_argument("--order", choices=("first", "full"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="coefficient audit and brute-force checks")
    _add_common(p)
    p.add_argument("--quick", action="store_true", help="coarser grids and looser tolerances")
    p.add_argument("--table", metavar="PATH", help="JSON coefficient table to audit")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("iterate", help="iterated cut trajectory")
    _add_common(p)
    _add_sigma(p)
    p.add_argument("--start", choices=("rectangle", "trapezoid", "triangle"), default="rectangle")
    p.add_argument("--steps", type=int)
    p.add_argument("--policy")
    p.add_argument("--iq-gate", dest="iq_gate", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--height", type=float)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("graphcut", help="graph 1-Laplacian bipartition of a sampled domain")
    _add_common(p)
    _add_sigma(p)
    p.add_argument("--domain", choices=("rectangle", "trapezoid"), default="rectangle")
    p.add_argument("--n-points", "-N", dest="n_points", type=int)
    p.add_argument("--knn", type=int)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--starts", type=int)
    p.add_argument("--width", type=float)
    p.add_argument("--height", type=float)
    p.set_defaults(func=cmd_graphcut)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sweep" and args.family not in (None, "all"):
            from .sweep import FAMILIES

            if args.family not in FAMILIES:
                raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
        cfg = _settings(args)
        return args.func(args, cfg, out)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ConfigError) as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (RatioCutError, DomainError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
