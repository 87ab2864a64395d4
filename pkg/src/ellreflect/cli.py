"""Command-line front end.

Subcommands
-----------
reflect    reflect one point and print the report as JSON
verify     run the verification battery, or check one manufactured field
riemann    Riemann function at a point (closed form and Goursat solver)
monodromy  increment of the logarithmic part around the reflected point
grid       CSV of true vs reflected values over a rectangular grid

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .complexcurve import AnalyticCurve, Circle, CPoint, curve_from_spec
from .errors import ConfigError, ReflectionError
from .manufactured import SolutionField, default_field, make_field, pde_residual
from .operator import EllipticOperator, riemann_const, riemann_goursat
from .reflectcore import ReflectOptions, reflect
from .reflected import SeriesDivergenceWarning, monodromy_increment
from .suite import CRITERIA, SuiteReport, run_criteria

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GRID_HEADER = ["x", "y", "u_true", "u_reflected", "abs_err"]
DEFAULT_CURVES = {
    "circle": {"kind": "circle", "cx": 0.0, "cy": 0.0, "r": 1.0},
    "line": {"kind": "line", "alpha": 0.0, "beta": 1.0, "delta": 0.0},
}


@dataclass
class RunConfig:
    operator: dict = dc_field(default_factory=lambda: {"a": 0.0, "b": 0.0, "c": 1.0})
    curve: dict = dc_field(default_factory=lambda: dict(DEFAULT_CURVES["circle"]))
    strategy: Optional[str] = None
    K: int = 5
    tol: float = 1e-10
    field: Optional[str] = None
    output: Optional[str] = None
    grid: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.K, int) or not 1 <= self.K <= 8:
            raise ConfigError("K must be an integer in [1, 8]")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        # eager validation of the nested specs
        self.build_operator()
        self.build_curve()
        if self.field is not None:
            self.build_field()

    def build_operator(self) -> EllipticOperator:
        return EllipticOperator.from_spec(self.operator)

    def build_curve(self) -> AnalyticCurve:
        return curve_from_spec(self.curve)

    def build_field(self) -> SolutionField:
        op, curve = self.build_operator(), self.build_curve()
        if self.field is None:
            try:
                return default_field(op, curve)
            except ReflectionError as exc:
                raise ConfigError(f"no default field for this configuration: {exc}") from exc
        return make_field(self.field, op, curve)

    def options(self) -> ReflectOptions:
        return ReflectOptions(K=self.K, tol=self.tol, strategy=self.strategy)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"operator", "curve", "strategy", "K", "tol", "field", "output", "grid"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: Optional[str]) -> "RunConfig":
        if path is None:
            return cls()
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
        return cls.from_dict(data)


def _pair(text: str) -> tuple:
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from exc
    return (x, y)


def _bounds(text: str) -> tuple:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'xmin,xmax,ymin,ymax', got {text!r}") from exc
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("bounds need four numbers")
    return vals


def _config(args) -> RunConfig:
    cfg = RunConfig.load(getattr(args, "config", None))
    overrides = {}
    if getattr(args, "order", None) is not None:
        overrides["K"] = args.order
    if getattr(args, "tol", None) is not None:
        overrides["tol"] = args.tol
    if getattr(args, "field", None) is not None:
        overrides["field"] = args.field
        kind = args.field.split(":", 1)[0]
        if getattr(args, "config", None) is None and kind in DEFAULT_CURVES:
            overrides["curve"] = dict(DEFAULT_CURVES[kind])
    if getattr(args, "strategy", None) is not None:
        overrides["strategy"] = args.strategy
    if overrides:
        data = cfg.__dict__.copy()
        data.update(overrides)
        cfg = RunConfig(**data)
    return cfg


def _emit(obj, path: Optional[str]):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------


def cmd_reflect(args) -> int:
    cfg = _config(args)
    u = cfg.build_field()
    rep = reflect(u.operator, u.curve, u, args.point, cfg.options(), check_paths=args.check_paths)
    out = rep.to_dict()
    out["diagnostics"].pop("runtime_s", None)
    out["u_true"] = float(u(*args.point))
    out["abs_err"] = abs(out["u_true"] - rep.total)
    out["field"] = u.label
    _emit(out, cfg.output)
    return EXIT_OK


def _field_points(curve: AnalyticCurve, n: int = 8):
    pts = []
    if isinstance(curve, Circle):
        for i in range(n):
            th = 0.3 + 2 * np.pi * i / n
            d = curve.radius * (0.05 + 0.1 * (i % 3) / 2)
            z = curve.center + (curve.radius - d) * np.exp(1j * th)
            pts.append((z.real, z.imag))
    else:
        base = curve.sample(n, 1.0)
        nrm = np.array([curve.alpha, curve.beta]) / np.sqrt(curve.norm2)
        for i, b in enumerate(base):
            off = 0.1 + 0.05 * (i % 4)
            pts.append((b.real + off * nrm[0], b.imag + off * nrm[1]))
    return pts


def verify_field(cfg: RunConfig) -> dict:
    """Boundary, residual and reflection checks for one manufactured field."""
    u = cfg.build_field()
    op = u.operator
    rows = []
    passed = u.boundary_max() <= 1e-10
    for p in _field_points(u.curve):
        rep = reflect(op, u.curve, u, p, cfg.options())
        truth = float(u(*p))
        err = abs(rep.total - truth)
        tol = 1e-10 * max(1.0, abs(truth)) if rep.strategy.point_to_point else 1e-3 * abs(truth) + 1e-12
        res = pde_residual(op, u, p, 1e-3, u.curve)
        ok = err <= tol and res <= 1e-4 * max(1.0, abs(truth))
        passed = passed and ok
        rows.append({"point": list(p), "strategy": rep.strategy.kind, "expected": truth, "actual": rep.total,
                     "abs_err": err, "pde_residual": res, "pass": ok})
    return {"field": u.label, "boundary_max": u.boundary_max(), "passed": passed, "points": rows}


def run_suite(cfg: RunConfig, ids=None) -> SuiteReport:
    """Run the verification battery; ``cfg.K`` sets the series order of the non-local check."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SeriesDivergenceWarning)
        return run_criteria(ids, K=cfg.K)


def cmd_verify(args) -> int:
    cfg = _config(args)
    if cfg.field is not None:
        out = verify_field(cfg)
        _emit(out, args.output or cfg.output)
        return EXIT_OK if out["passed"] else EXIT_FAIL
    try:
        ids = [int(c) for c in args.criteria.split(",")] if args.criteria else None
    except ValueError as exc:
        raise ConfigError(f"bad criteria list {args.criteria!r}") from exc
    if ids and any(i not in CRITERIA for i in ids):
        raise ConfigError(f"criterion ids must be in 1..{len(CRITERIA)}")
    rep = run_suite(cfg, ids)
    if not args.quiet:
        for r in rep.results:
            print(r.line(), file=sys.stderr)
    _emit(rep.to_dict(), args.output or cfg.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_riemann(args) -> int:
    cfg = _config(args)
    op = cfg.build_operator()
    p0 = CPoint.from_real(*args.source)
    p = CPoint.from_real(*args.point)
    out = {"source": list(args.source), "point": list(args.point)}
    if op.constant_flag:
        r = riemann_const(op, p0, p)
        out.update(closed_re=r.real, closed_im=r.imag)
    if args.goursat:
        g = riemann_goursat(op, p0, (p.z, p.zeta), n=args.goursat)
        val = complex(g.values[-1, -1])
        out.update(goursat_re=val.real, goursat_im=val.imag, goursat_iterations=g.iterations)
    _emit(out, cfg.output)
    return EXIT_OK


def emit_grid(cfg: RunConfig, path: Optional[str], bounds=None, nx: Optional[int] = None,
              ny: Optional[int] = None, validity_factor: float = 0.25) -> int:
    """Write the grid CSV; returns the number of data rows."""
    g = dict(cfg.grid)
    if bounds is not None:
        g.update(xmin=bounds[0], xmax=bounds[1], ymin=bounds[2], ymax=bounds[3])
    if nx is not None:
        g["nx"] = nx
    if ny is not None:
        g["ny"] = ny
    u = cfg.build_field()
    op, curve = u.operator, u.curve
    nx_, ny_ = int(g.get("nx", 0)), int(g.get("ny", 0))
    rows = []
    if nx_ > 0 and ny_ > 0 and "xmin" in g:
        xs = np.linspace(g["xmin"], g["xmax"], nx_)
        ys = np.linspace(g["ymin"], g["ymax"], ny_)
        opts = cfg.options()
        opts.validity_factor = validity_factor
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SeriesDivergenceWarning)
            for y in ys:
                for x in xs:
                    dist = float(curve.distance(x, y))
                    if dist <= 1e-12 or dist > validity_factor * curve.scale:
                        continue
                    truth = float(u(x, y))
                    val = reflect(op, curve, u, (x, y), opts).total
                    rows.append((x, y, truth, val, abs(truth - val)))
    fh = open(path, "w", encoding="utf-8", newline="") if path else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(GRID_HEADER)
        for r in rows:
            w.writerow([format(float(v), ".17g") for v in r])
    finally:
        if path:
            fh.close()
    return len(rows)


def cmd_grid(args) -> int:
    cfg = _config(args)
    emit_grid(cfg, args.out or cfg.output, args.bounds, args.nx, args.ny, args.validity)
    return EXIT_OK


def cmd_monodromy(args) -> int:
    cfg = _config(args)
    op, curve = cfg.build_operator(), cfg.build_curve()
    res = monodromy_increment(op, curve, args.point, args.rho, n_quad=args.nquad, K=cfg.K)
    _emit(res.to_dict(), cfg.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellreflect", description=__doc__.split("\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        p.add_argument("--config", help="JSON run configuration (operator, curve, field, ...)")
        if order:
            p.add_argument("--order", type=int, help="series order K (1..8)")

    p = sub.add_parser("reflect", help="reflect one point")
    common(p)
    p.add_argument("--point", type=_pair, required=True, help="source point P as x,y")
    p.add_argument("--tol", type=float, help="path quadrature tolerance")
    p.add_argument("--field", help="manufactured field label, e.g. circle:helmholtz:n=1")
    p.add_argument("--strategy", choices=["schwarz_p2p", "line_p2p", "gauge_p2p", "nonlocal"])
    p.add_argument("--check-paths", action="store_true", help="also integrate along two alternative paths")
    p.set_defaults(func=cmd_reflect)

    p = sub.add_parser("verify", help="run the verification battery or check one field")
    common(p)
    p.add_argument("--field", help="check only this field label")
    p.add_argument("--criteria", help="comma-separated criterion ids (default: all)")
    p.add_argument("--output", help="write the JSON report here")
    p.add_argument("--quiet", action="store_true", help="suppress the per-criterion summary on stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("riemann", help="Riemann function value")
    common(p, order=False)
    p.add_argument("--source", type=_pair, required=True, help="source point as x,y")
    p.add_argument("--point", type=_pair, required=True, help="evaluation point as x,y")
    p.add_argument("--goursat", type=int, default=0, metavar="N", help="also solve the Goursat problem on an N x N grid")
    p.set_defaults(func=cmd_riemann)

    p = sub.add_parser("monodromy", help="monodromy increment around the reflected point")
    common(p)
    p.add_argument("--point", type=_pair, required=True, help="source point P as x,y")
    p.add_argument("--rho", type=float, required=True, help="radius of the loop around Q")
    p.add_argument("--nquad", type=int, default=64, help="samples on the loop")
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("grid", help="CSV of true vs reflected values")
    common(p)
    p.add_argument("--bounds", type=_bounds, help="xmin,xmax,ymin,ymax")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--field", help="manufactured field label")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--validity", type=float, default=0.25, help="max dist(P, curve) / curve scale")
    p.set_defaults(func=cmd_grid)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReflectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
