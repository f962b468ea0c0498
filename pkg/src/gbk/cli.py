"""Command line front end: ``gbk <subcommand> [options]``.

Exit codes: 0 pass, 1 a mathematical violation was found, 2 input error,
3 numeric failure.  Reports are JSON (sorted keys, round-trip floats) or CSV.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Sequence

import numpy as np

from . import cones, graph, region
from .errors import GBKError, InvalidInputError, NumericError, PreconditionError
from .grassmann import (
    GrassmannPoint,
    distance,
    is_s_orthogonal,
    jordan_angles,
    polar_from_smap,
    random_point,
    s_map,
    w_function,
)
from .multivector import inner, wedge

EXIT_PASS, EXIT_VIOLATION, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    command: str = ""
    inputs: list = field(default_factory=list)
    example: str | None = None
    c: float = 0.4
    delta: float = 0.05
    beta0: float = 10.0
    beta1: float = 2.9
    mu0: float = 1.0
    h_first: float = 1e-4
    h_lap: float = 1e-3
    samples: int = 20
    seed: int = 0
    output: str | None = None
    format: str = "json"

    @classmethod
    def from_mapping(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_frame(path: str) -> GrassmannPoint:
    """Read a frame file ``{"n": .., "m": .., "frame": [[..], ..]}``."""
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InvalidInputError(f"{path}: expected a JSON object")
    try:
        n, m = int(obj["n"]), int(obj["m"])
        rows = obj["frame"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"{path}: frame record needs integer n, m and a frame") from exc
    if not isinstance(rows, list) or len(rows) != n:
        raise InvalidInputError(f"{path}: frame must have {n} rows")
    for k, row in enumerate(rows, start=1):
        if not isinstance(row, list) or len(row) != n + m:
            raise InvalidInputError(f"{path}: frame row {k} must have {n + m} entries")
    return GrassmannPoint.from_basis(np.array(rows, dtype=float), m)


# ---------------------------------------------------------------------------
# expressions

_FUNCS: dict[str, Callable] = {"sqrt": np.sqrt, "sin": np.sin, "cos": np.cos, "exp": np.exp}
_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply, ast.Div: np.divide,
           ast.Pow: np.power}


def compile_expression(text: str, n: int) -> Callable[[np.ndarray], float]:
    """Compile an arithmetic expression in ``x1..xn``.

    Grammar: numbers, the variables, ``+ - * / ^`` (``**`` also accepted),
    parentheses and ``sqrt``, ``sin``, ``cos``, ``exp``.
    """
    try:
        # '^' means power; rewriting it gives it Python's power precedence as well
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InvalidInputError(f"invalid expression {text!r}: {exc.msg}") from exc

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            value = float(node.value)
            return lambda x: value
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith("x") and name[1:].isdigit() and 1 <= int(name[1:]) <= n:
                k = int(name[1:]) - 1
                return lambda x: x[k]
            raise InvalidInputError(f"unknown variable {name!r} (use x1..x{n})")
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op = _BINOPS[type(node.op)]
            left, right = build(node.left), build(node.right)
            return lambda x: op(left(x), right(x))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner_ = build(node.operand)
            sign = -1.0 if isinstance(node.op, ast.USub) else 1.0
            return lambda x: sign * inner_(x)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
            fn, arg = _FUNCS[node.func.id], build(node.args[0])
            return lambda x: fn(arg(x))
        raise InvalidInputError(f"unsupported syntax in expression {text!r}: {ast.dump(node)[:40]}")

    return build(tree)


def expression_graph(exprs: Sequence[str], n: int, h_first: float = 1e-4, h_second: float = 1e-3) -> graph.GraphMap:
    comps = [compile_expression(e, n) for e in exprs]
    if not comps:
        raise InvalidInputError("no expression given")

    def func(x):
        return np.array([float(c(x)) for c in comps])

    return graph.GraphMap(n, len(comps), func, name="expression", h_first=h_first, h_second=h_second)


def table_graph(path: str, n: int) -> graph.GraphMap:
    """CSV with a header; the first ``n`` columns are coordinates, the rest values."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            data.append([float(v) for v in row])
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{lineno}: non-numeric entry") from exc
    arr = np.array(data)
    if arr.ndim != 2 or arr.shape[1] <= n:
        raise InvalidInputError(f"{path}: need more than {n} columns")
    return graph.GraphMap.from_table(arr[:, :n], arr[:, n:], name=os.path.basename(path))


# ---------------------------------------------------------------------------
# output

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def render(report: dict, fmt: str) -> str:
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    rows = report.get("rows", [])
    buf = io.StringIO()
    if rows:
        keys = sorted({k for r in rows for k in r})
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        for r in rows:
            writer.writerow([_csv_cell(r.get(k)) for k in keys])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(_csv_cell(x) for x in v)
    return "" if v is None else v


# ---------------------------------------------------------------------------
# commands

def cmd_jordan(cfg: RunConfig, args) -> tuple[dict, int]:
    p, q = load_frame(args.p), load_frame(args.q)
    data = jordan_angles(p, q)
    orth = is_s_orthogonal(p, q)
    report = {
        "command": "jordan",
        "angles": data.angles,
        "w": w_function(p, q),
        "distance": distance(p, q),
        "s_orthogonal": bool(orth),
        "rows": [{"index": k, "angle": a, "cos": math.cos(a)} for k, a in enumerate(data.angles)],
    }
    return report, EXIT_PASS


def cmd_smap(cfg: RunConfig, args) -> tuple[dict, int]:
    p, q = load_frame(args.p), load_frame(args.q)
    if not is_s_orthogonal(p, q):
        raise InvalidInputError("P and Q are not S-orthogonal")
    points = [load_frame(path) for path in args.s]
    if args.random:
        rng = np.random.default_rng(cfg.seed)
        points += [random_point(p.n, p.m, rng) for _ in range(args.random)]
    rows = []
    for k, s in enumerate(points):
        x1, x2 = s_map(s, p, q)
        row = {"index": k, "x1": x1, "x2": x2, "radius": math.hypot(x1, x2)}
        try:
            row["r"], row["theta"] = polar_from_smap(x1, x2)
        except GBKError:
            row["r"], row["theta"] = math.hypot(x1, x2), None
        rows.append(row)
    return {"command": "smap", "rows": rows}, EXIT_PASS


def _region_spec(cfg: RunConfig, args) -> region.RegionSpec:
    if args.region:
        spec = region.RegionSpec.from_json(_load_json(args.region))
    else:
        p = GrassmannPoint.coordinate(args.n, args.m)
        # Q = e_{n+1} ^ e_2 ^ ... ^ e_n
        frame = np.eye(args.n, args.n + args.m)
        frame[0] = 0.0
        frame[0, args.n] = 1.0
        spec = region.RegionSpec.from_points(p, GrassmannPoint(args.n, args.m, frame), cfg.c, cfg.delta,
                                             tuple(args.theta_set))
    return spec


def cmd_region_check(cfg: RunConfig, args) -> tuple[dict, int]:
    spec = _region_spec(cfg, args)
    rng = np.random.default_rng(cfg.seed)
    points = [load_frame(path) for path in args.s]
    points += region.sample_region(spec, rng, cfg.samples)
    phi = region.build_phi(spec.c, args.variant)
    fam = region.HFamily(spec, phi, cfg.mu0)
    t = args.t
    rows = []
    bad = 0
    for k, s in enumerate(points):
        rep = region.in_region(s, spec)
        row = {"index": k, "inside": rep.inside, "r": rep.r, "theta": rep.theta,
               "deleted_radius": rep.on_deleted_radius}
        if rep.inside and rep.r >= spec.c + 2 * spec.delta:
            lc = region.check_level(s, spec)
            row.update(F=lc.t, level_residual=lc.residual)
            bad += lc.residual > 1e-10
        if rep.inside:
            ht = fam.tilde_polar(rep.r, rep.theta, t)
            wt = w_function(s, spec.pair.point(t))
            h = fam.from_tilde(ht)
            row.update(H_tilde=ht, H=h, w_t=wt)
            if abs(wt - fam.w_threshold) > 1e-6 and (h <= 1.0) != (wt >= fam.w_threshold):
                bad += 1
        rows.append(row)
    report = {"command": "region-check", "region": spec.to_json(), "t": t, "beta": phi.beta,
              "w_threshold": fam.w_threshold, "rows": rows, "violations": int(bad)}
    return report, EXIT_VIOLATION if bad else EXIT_PASS


def _graph_from_args(cfg: RunConfig, args) -> graph.GraphMap:
    if args.expr:
        if args.n is None:
            raise InvalidInputError("--expr needs --n")
        return expression_graph(args.expr, args.n, cfg.h_first)
    if args.table:
        if args.n is None:
            raise InvalidInputError("--table needs --n")
        return table_graph(args.table, args.n)
    return graph.get_example(cfg.example or "affine")


def _graph_points(g: graph.GraphMap, cfg: RunConfig, args) -> np.ndarray:
    lo, hi = args.box
    pts = graph.box_samples(g.n, cfg.samples, lo, hi, exclude_radius=args.exclude_radius,
                            domain=g.domain if g.domain is not None else None)
    crit = [np.asarray(c, dtype=float) for c in g.critical_points]
    crit += [np.array([float(v) for v in c.split(",")]) for c in args.critical or []]
    if crit:
        pts = np.vstack([np.array(crit), pts])
    return pts


def cmd_graph_check(cfg: RunConfig, args) -> tuple[dict, int]:
    g = _graph_from_args(cfg, args)
    pts = _graph_points(g, cfg, args)
    rep = graph.check_bernstein_hypotheses(g, pts, cfg.beta0, cfg.beta1, args.alpha, args.index)
    rows = [{"index": s.index, "x": s.x, "delta_f": s.delta_f, "slope": s.slope,
             "required_beta1": s.required_beta1, "margin_beta0": s.margin_beta0,
             "margin_beta1": s.margin_beta1, "w_p": s.w_p, "w_q": s.w_q, "ok": s.ok}
            for s in rep.samples]
    report = {
        "command": "graph-check", "graph": g.name, "mode": g.mode, "beta0": rep.beta0,
        "beta1": rep.beta1, "alpha": rep.alpha, "i": rep.i, "verdict": rep.verdict,
        "min_admissible_beta1": rep.min_admissible_beta1, "beta1_required": rep.beta1_required,
        "min_margin": rep.min_margin, "max_margin": rep.max_margin,
        "witnesses": [s.index for s in rep.violations], "rows": rows,
    }
    return report, EXIT_PASS if rep.passed else EXIT_VIOLATION


def _verify_rows(identity: str, cfg: RunConfig, args) -> tuple[list[dict], bool]:
    rng = np.random.default_rng(cfg.seed)
    rows: list[dict] = []
    ok = True
    if identity == "pluck":
        for k in range(cfg.samples):
            frame = GrassmannPoint.from_basis(rng.standard_normal((4, 7)), 3).frame
            full = np.vstack([frame, GrassmannPoint(4, 3, frame).complement])
            A = wedge(GrassmannPoint.from_basis(rng.standard_normal((4, 7)), 3).frame)
            e, nu = full[:4], full[4:]
            a, b = 0, 1

            def rep(rows_):
                f = e.copy()
                for j, v in rows_.items():
                    f[j] = v
                return inner(wedge(f), A)

            val = (rep({}) * rep({0: nu[a], 1: nu[b]}) - rep({0: nu[a]}) * rep({1: nu[b]})
                   + rep({0: nu[b]}) * rep({1: nu[a]}))
            rows.append({"index": k, "residual": abs(val), "ok": abs(val) <= 1e-10})
    elif identity == "lo-constants":
        g = cones.lo_graph()
        coord = GrassmannPoint.coordinate(4, 3)
        for k in range(cfg.samples):
            x = rng.standard_normal(4)
            x *= rng.uniform(0.2, 5.0) / np.linalg.norm(x)
            geom = graph.geometry_at(g, x)
            gamma = GrassmannPoint(4, 3, geom.tangent_frame)
            wv = w_function(gamma, coord)
            ang = jordan_angles(gamma, coord).angles
            err = float(np.max(np.abs(ang - cones.LO_ANGLES)))
            good = abs(wv - 1 / 9) <= 1e-8 and abs(geom.delta_f - 9) <= 1e-7 and err <= 1e-8
            rows.append({"index": k, "x": x, "w": wv, "delta_f": geom.delta_f, "angle_error": err,
                         "ok": good})
    elif identity == "level-set":
        spec = _region_spec(cfg, args)
        for k, s in enumerate(region.sample_region(spec, rng, cfg.samples,
                                                   r_min=spec.c + 2 * spec.delta)):
            lc = region.check_level(s, spec)
            lg = region.level_gradients(s, spec)
            good = lc.residual <= 1e-10 and lg.cosine > 1 - 1e-6
            rows.append({"index": k, "t": lc.t, "w_t": lc.w_at_t, "residual": lc.residual,
                         "cosine": lg.cosine, "ok": good})
    elif identity in ("dw", "delta-w", "rank", "subhar3"):
        default = "holomorphic-sq(0.3)" if identity == "subhar3" else "holomorphic-sq"
        g = graph.get_example(cfg.example or default)
        pts = graph.box_samples(g.n, cfg.samples, -1.0, 1.0, exclude_radius=0.2, domain=g.domain)
        for k, x in enumerate(pts):
            try:
                rows.append(_verify_point(identity, g, k, x, cfg, args))
            except PreconditionError as exc:
                # the identity does not apply here; report the point without judging it
                rows.append({"index": k, "x": x, "skipped": str(exc), "ok": True})
    else:
        raise InvalidInputError(f"unknown identity {identity!r}")
    ok = all(r["ok"] for r in rows)
    return rows, ok


def _verify_point(identity: str, g: graph.GraphMap, k: int, x, cfg: RunConfig, args) -> dict:
    if identity == "dw":
        chk = graph.verify_dw(g, x, h=cfg.h_first)
        return {"index": k, "x": x, "residual": chk.residual, "ok": chk.residual <= 1e-4}
    if identity == "delta-w":
        chk = graph.verify_delta_w(g, x, h=cfg.h_lap)
        return {"index": k, "x": x, "lhs": chk.lhs[0], "rhs": chk.rhs[0],
                "residual": chk.residual, "ok": chk.residual <= 1e-3}
    if identity == "rank":
        chk = graph.verify_rank_inequality(g, x, h=cfg.h_lap)
        return {"index": k, "x": x, "lhs": chk.lhs, "rhs": chk.rhs, "rank": chk.rank, "ok": chk.ok}
    chk = graph.verify_subhar3(g, x, args.subhar_delta, h=cfg.h_lap)
    return {"index": k, "x": x, "lhs": chk.lhs, "B_norm2": chk.B_norm2,
            "c1_estimate": chk.c1_estimate, "ok": chk.ok}


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    rows, ok = _verify_rows(args.identity, cfg, args)
    worst = max((r.get("residual", 0.0) for r in rows), default=0.0)
    report = {"command": "verify", "identity": args.identity, "pass": ok, "worst_residual": worst,
              "rows": rows}
    return report, EXIT_PASS if ok else EXIT_VIOLATION


def cmd_lo_cone(cfg: RunConfig, args) -> tuple[dict, int]:
    g = cones.lo_graph()
    rng = np.random.default_rng(cfg.seed)
    pts = [np.array([0.0, 0.0, 1.0, 0.0])]
    for _ in range(cfg.samples):
        x = rng.standard_normal(4)
        pts.append(x * rng.uniform(0.2, 5.0) / np.linalg.norm(x))
    coord = GrassmannPoint.coordinate(4, 3)
    rows = []
    for k, x in enumerate(pts):
        geom = graph.geometry_at(g, x)
        gamma = GrassmannPoint(4, 3, geom.tangent_frame)
        rows.append({"index": k, "x": x, "w": w_function(gamma, coord), "delta_f": geom.delta_f,
                     "angles": jordan_angles(gamma, coord).angles, "H_norm": geom.H_norm,
                     "df2_dx1": geom.Df[0, 1]})
    if args.frame_out:
        gamma = GrassmannPoint(4, 3, graph.geometry_at(g, pts[1]).tangent_frame)
        with open(args.frame_out, "w") as fh:
            json.dump(gamma.to_json(), fh)
    report = {"command": "lo-cone", "expected_angles": cones.LO_ANGLES, "expected_w": 1 / 9,
              "rows": rows}
    return report, EXIT_PASS


def cmd_rigidity(cfg: RunConfig, args) -> tuple[dict, int]:
    imm = cones.get_immersion(args.immersion)
    p, q = load_frame(args.p), load_frame(args.q)
    rng = np.random.default_rng(cfg.seed)
    params = imm.sample_params(rng, cfg.samples)
    rep = cones.check_rigidity_hypothesis(imm, p, q, params, args.rank_le_2)
    rows = [{"index": s.index, "u": s.u, "w_p": s.w_p, "w_q": s.w_q, "value": s.value,
             "ok": s.ok, "excluded": s.excluded} for s in rep.samples]
    report = {"command": "rigidity", "immersion": imm.name, "threshold": rep.threshold,
              "pass": rep.passed, "min_value": rep.min_value,
              "witnesses": [s.index for s in rep.violations], "rows": rows}
    return report, EXIT_PASS if rep.passed else EXIT_VIOLATION


COMMANDS = {
    "jordan": cmd_jordan,
    "smap": cmd_smap,
    "region-check": cmd_region_check,
    "graph-check": cmd_graph_check,
    "verify": cmd_verify,
    "lo-cone": cmd_lo_cone,
    "rigidity": cmd_rigidity,
}


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=["json", "csv"])
    for name in ("c", "delta", "beta0", "beta1", "mu0", "h-first", "h-lap"):
        p.add_argument(f"--{name}", type=float)


def _add_region(p: argparse.ArgumentParser) -> None:
    p.add_argument("--region", help="region JSON (P, Q, c, delta, theta_set)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--theta-set", type=float, nargs=2, default=(-2.3, 2.3))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbk", description="Grassmannian geometry and Bernstein-type checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("jordan", help="Jordan angles, w and distance of two planes")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    _add_common(p)

    p = sub.add_parser("smap", help="S-map coordinates of planes")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--s", nargs="*", default=[])
    p.add_argument("--random", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("region-check", help="membership, F level sets and the H family")
    _add_region(p)
    p.add_argument("--s", nargs="*", default=[])
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--variant", choices=sorted(region.VARIANTS), default="general")
    _add_common(p)

    p = sub.add_parser("graph-check", help="Bernstein-type hypotheses on a graph")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--example")
    src.add_argument("--expr", action="append")
    src.add_argument("--table")
    p.add_argument("--n", type=int)
    p.add_argument("--box", type=float, nargs=2, default=(-2.0, 2.0))
    p.add_argument("--exclude-radius", type=float, default=0.1)
    p.add_argument("--critical", action="append", help="extra sample point, comma separated")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--index", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("verify", help="numerical identity checks")
    p.add_argument("identity", choices=["dw", "delta-w", "rank", "subhar3", "pluck", "level-set",
                                        "lo-constants"])
    p.add_argument("--example")
    p.add_argument("--subhar-delta", type=float, default=0.05)
    _add_region(p)
    _add_common(p)

    p = sub.add_parser("lo-cone", help="Lawson-Osserman cone constants")
    p.add_argument("--frame-out", help="write one tangent frame to this file")
    _add_common(p)

    p = sub.add_parser("rigidity", help="normal Gauss map hypothesis on a sphere immersion")
    p.add_argument("--immersion", default="clifford-torus")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--rank-le-2", action="store_true")
    _add_common(p)
    return parser


def make_config(args, environ=None) -> RunConfig:
    """Merge defaults, ``--config`` file, command line flags and ``GBK_SEED``.

    Precedence (lowest first): defaults, config file, ``GBK_SEED``, flags.
    """
    environ = os.environ if environ is None else environ
    base = _load_json(args.config) if getattr(args, "config", None) else {}
    if not isinstance(base, dict):
        raise InvalidInputError("config file must hold a JSON object")
    cfg = RunConfig.from_mapping(base)
    cfg.command = args.command
    if "GBK_SEED" in environ:
        try:
            cfg.seed = int(environ["GBK_SEED"])
        except ValueError as exc:
            raise InvalidInputError("GBK_SEED must be an integer") from exc
    flag_map = {"seed": "seed", "samples": "samples", "output": "output", "format": "format",
                "c": "c", "delta": "delta", "beta0": "beta0", "beta1": "beta1", "mu0": "mu0",
                "h_first": "h_first", "h_lap": "h_lap", "example": "example"}
    for attr, key in flag_map.items():
        val = getattr(args, attr, None)
        if val is not None:
            setattr(cfg, key, val)
    if cfg.format not in ("json", "csv"):
        raise InvalidInputError(f"format must be json or csv, got {cfg.format!r}")
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        report, code = COMMANDS[args.command](cfg, args)
        text = render(report, cfg.format)
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except NumericError as exc:
        print(f"gbk: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GBKError, ValueError, OSError) as exc:
        print(f"gbk: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
