"""Reflection of solutions of ``L u = 0`` that vanish on a curve.

For a point ``P`` near Gamma and its mirror image ``Q = R(P)``:

    u(P) = -c0(P) u(Q) + (1 / 2i) int_E^Q  {u V_x - V u_x - a u V} dy
                                         - {u V_y - V u_y - b u V} dx

where ``E`` is a point of Gamma and ``V = V_1 - V_2`` is the difference of
the reflected Riemann-type functions of :mod:`ellreflect.reflected`.  The
integral vanishes identically when Gamma is a line or when
``a^2 + b^2 = 4c``; in those cases (and for the Laplace operator) the
formula is point-to-point and no quadrature is needed.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import quad
from .complexcurve import AnalyticCurve, CPoint, Line, ReflectionContext
from .errors import StrategyError, ValidityError
from .manufactured import SolutionField
from .operator import EllipticOperator, char_coeffs
from .reflected import VEvaluator, c0

GAUGE_TOL = 1e-12
STRATEGIES = ("schwarz_p2p", "line_p2p", "gauge_p2p", "nonlocal")


@dataclass(frozen=True)
class ReflectionStrategy:
    kind: str
    justification: str

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise StrategyError(f"unknown strategy {self.kind!r}")

    @property
    def point_to_point(self) -> bool:
        return self.kind != "nonlocal"


@dataclass
class ReflectOptions:
    """Tuning knobs for :func:`reflect`.

    ``anchor`` overrides the default anchor (projection of ``Q`` onto Gamma);
    ``via`` inserts intermediate vertices into the path ``E -> Q``.
    ``validity_factor`` bounds ``dist(P, Gamma) / scale``; ``path_factor``
    bounds the distance of path vertices from Gamma in the same units.
    """

    K: int = 5
    tol: float = 1e-10
    strategy: Optional[str] = None
    mode: str = "series"
    anchor: Optional[tuple] = None
    via: Sequence = ()
    validity_factor: float = 0.25
    path_factor: float = 0.5
    boundary_tol: float = 1e-8
    check_boundary: bool = True


@dataclass
class ReflectionReport:
    total: float
    q_term: float
    integral_term: float
    strategy: ReflectionStrategy
    path: list
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["strategy"] = {"kind": self.strategy.kind, "justification": self.strategy.justification}
        return out


@dataclass(frozen=True)
class IntegralTerm:
    value: float
    imag: float
    error: float
    v_sup: float
    evaluations: int


def dispatch(op: EllipticOperator, curve: AnalyticCurve) -> ReflectionStrategy:
    """Pick the cheapest formula that is exact for this operator/curve pair."""
    a, b, c = op.require_constant()
    if op.is_laplace:
        return ReflectionStrategy("schwarz_p2p", "Laplace operator: the Schwarz function gives u(P) = -u(Q)")
    if isinstance(curve, Line):
        return ReflectionStrategy("line_p2p", "straight line: V vanishes identically")
    if abs(a * a + b * b - 4 * c) <= GAUGE_TOL:
        return ReflectionStrategy("gauge_p2p", "a^2 + b^2 - 4c = 0: V_1 = V_2 = Riemann function")
    return ReflectionStrategy("nonlocal", "no point-to-point exception applies")


def _applicable(kind: str, op: EllipticOperator, curve: AnalyticCurve) -> bool:
    a, b, c = op.require_constant()
    if kind == "schwarz_p2p":
        return op.is_laplace
    if kind == "line_p2p":
        return isinstance(curve, Line)
    if kind == "gauge_p2p":
        return abs(a * a + b * b - 4 * c) <= GAUGE_TOL
    return True


def line_factor(op: EllipticOperator, line: Line, p) -> float:
    a, b, _ = op.require_constant()
    x0, y0 = p
    return -float(np.exp(-line.defining(x0, y0) * (a * line.alpha + b * line.beta) / line.norm2))


def reflect_line(op: EllipticOperator, line: Line, p, u_at_Q: float) -> float:
    """``u(P) = -exp(-(alpha x0 + beta y0 + delta)(a alpha + b beta) / (alpha^2 + beta^2)) u(Q)``."""
    if not isinstance(line, Line):
        raise StrategyError("reflect_line needs a Line")
    return line_factor(op, line, p) * u_at_Q


def gauge_factor(op: EllipticOperator, curve: AnalyticCurve, p) -> float:
    a, b, c = op.require_constant()
    if abs(a * a + b * b - 4 * c) > GAUGE_TOL:
        raise StrategyError("gauge reflection needs a^2 + b^2 = 4c")
    cc = char_coeffs(op)
    src = CPoint.from_real(*p)
    expo = cc.A0 * (complex(curve.schwarz(src.z)) - src.zeta) + cc.B0 * (complex(curve.schwarz_inverse(src.zeta)) - src.z)
    return -float(np.exp(expo.real))


def reflect_gauge(op: EllipticOperator, curve: AnalyticCurve, p, u_at_Q: float) -> float:
    """``u(P) = -exp(A (S(z0) - zeta0) + B (S~(zeta0) - z0)) u(Q)`` when ``a^2 + b^2 = 4c``."""
    return gauge_factor(op, curve, p) * u_at_Q


def _make_form(op: EllipticOperator, u: SolutionField, ve: VEvaluator, tracker: list):
    a, b, _ = op.require_constant()

    def form(x, y):
        V, Vx, Vy, _ = ve.real(x, y)
        uu = u(x, y)
        ux, uy = u.grad(x, y)
        tracker.append(float(np.max(np.abs(V), initial=0.0)))
        P = -(uu * Vy - V * uy - b * uu * V)
        Q = uu * Vx - V * ux - a * uu * V
        return P, Q

    return quad.FormEvaluator(form)


def integral_term(op: EllipticOperator, curve: AnalyticCurve, u: SolutionField, ve: VEvaluator,
                  path: quad.Path, tol: float = 1e-10, boundary_tol: float = 1e-8) -> IntegralTerm:
    """``(1 / 2i)`` times the path integral of the reflection form along ``path``."""
    start = path.vertices[0]
    if not curve.contains(start.real, start.imag, tol=1e-9 * max(1.0, abs(start))):
        raise ValidityError("integration path must start on the curve")
    if abs(float(u(start.real, start.imag))) > boundary_tol:
        raise ValidityError("solution does not vanish at the path's starting point on the curve")
    tracker: list = []
    res = quad.integrate_path(_make_form(op, u, ve, tracker), path, tol)
    val = res.value / 2j
    return IntegralTerm(float(val.real), float(val.imag), res.error / 2, max(tracker, default=0.0), res.evaluations)


def _check_path(curve: AnalyticCurve, vertices, limit: float):
    for v in vertices:
        if float(curve.distance(v.real, v.imag)) > limit:
            raise ValidityError(f"path vertex {v} leaves the validity region")


def build_path(ctx: ReflectionContext, anchor=None, via=()) -> quad.Path:
    e = ctx.anchor if anchor is None else anchor
    verts = [complex(e[0], e[1])] + [complex(v[0], v[1]) for v in via] + [ctx.reflected.z]
    return quad.Path(tuple(verts))


def alternate_paths(ctx: ReflectionContext) -> list:
    """Two extra paths to ``Q``: one from a shifted anchor and one with a detour."""
    curve = ctx.curve
    E = complex(*ctx.anchor)
    Q = ctx.reflected.z
    # shift the anchor along the curve by about the offset distance
    tangent_pt = E + 0.8j * (Q - E)
    E2 = complex(*curve.project(tangent_pt.real, tangent_pt.imag))
    detour = 0.5 * (E + Q) + 0.4j * (Q - E)
    return [
        quad.Path((E2, Q)),
        quad.Path((E, detour, Q)),
    ]


def reflect(op: EllipticOperator, curve: AnalyticCurve, u: SolutionField, p,
            options: Optional[ReflectOptions] = None, check_paths: bool = False) -> ReflectionReport:
    """Evaluate ``u(P)`` from data on the far side of the curve."""
    opts = options or ReflectOptions()
    t0 = time.perf_counter()
    x0, y0 = float(p[0]), float(p[1])
    dist = float(curve.distance(x0, y0))
    if dist > opts.validity_factor * curve.scale:
        raise ValidityError(f"dist(P, curve) = {dist:.3g} exceeds {opts.validity_factor} x curve scale")
    ctx = ReflectionContext.build(curve, (x0, y0))
    if opts.strategy is None:
        strategy = dispatch(op, curve)
    else:
        if not _applicable(opts.strategy, op, curve):
            raise StrategyError(f"strategy {opts.strategy!r} does not apply here")
        strategy = ReflectionStrategy(opts.strategy, "requested explicitly")
    xq, yq = ctx.q_xy
    u_q = float(u(xq, yq))
    ex, ey = ctx.anchor if opts.anchor is None else opts.anchor
    if opts.check_boundary and abs(float(u(ex, ey))) > opts.boundary_tol:
        raise ValidityError("solution does not vanish on the curve at the anchor")
    path = build_path(ctx, opts.anchor, opts.via) if dist > 0 else None
    diag = {"K": opts.K, "tol": opts.tol, "Q": [xq, yq], "anchor": [ex, ey], "dist": dist}

    integral = 0.0
    if strategy.kind == "schwarz_p2p":
        factor = -1.0
    elif strategy.kind == "line_p2p":
        factor = line_factor(op, curve, (x0, y0))
    elif strategy.kind == "gauge_p2p":
        factor = gauge_factor(op, curve, (x0, y0))
    else:
        factor = -c0(op, curve, ctx.source)
        if path is not None:
            _check_path(curve, path.vertices, opts.path_factor * curve.scale)
            ve = VEvaluator(op, curve, ctx.source, opts.mode, opts.K)
            it = integral_term(op, curve, u, ve, path, opts.tol, opts.boundary_tol)
            integral = it.value
            diag.update(quad_error=it.error, integral_imag=it.imag, v_sup=it.v_sup, evaluations=it.evaluations)
            if check_paths:
                others = []
                for alt in alternate_paths(ctx):
                    _check_path(curve, alt.vertices, opts.path_factor * curve.scale)
                    others.append(integral_term(op, curve, u, ve, alt, opts.tol, opts.boundary_tol).value)
                diag["path_independence"] = max(abs(o - integral) for o in others)
    q_term = factor * u_q
    diag["factor"] = factor
    diag["runtime_s"] = time.perf_counter() - t0
    verts = path.as_list() if path is not None else [[x0, y0], [x0, y0]]
    return ReflectionReport(q_term + integral, q_term, integral, strategy, verts, diag)
