"""Exact solutions of ``L u = 0`` that vanish on the built-in curves.

Every constant-coefficient operator is reduced by the gauge substitution
``u = exp(-(a x + b y) / 2) w`` to ``(Delta + mu2) w = 0`` with
``mu2 = c - (a^2 + b^2) / 4``.  Separable solutions of the reduced equation
that vanish on a line or a circle then give manufactured fields with
analytic first derivatives.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import bessel
from .complexcurve import AnalyticCurve, Circle, Line
from .errors import ConfigError, DomainError, ValidityError
from .operator import EllipticOperator, gauge_split

FD_STEP = 1e-6


@dataclass(frozen=True, eq=False)
class SolutionField:
    """A solution ``u`` with first derivatives and metadata.

    ``ux``/``uy`` may be ``None``, in which case central differences with
    step ``1e-6`` are used (about 1e-10 relative accuracy).
    """

    u: Callable
    ux: Optional[Callable]
    uy: Optional[Callable]
    operator: EllipticOperator
    curve: AnalyticCurve
    label: str = ""
    params: dict = field(default_factory=dict)

    def __call__(self, x, y):
        return self.u(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def grad(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.ux is not None and self.uy is not None:
            return self.ux(x, y), self.uy(x, y)
        h = FD_STEP
        return (
            (self.u(x + h, y) - self.u(x - h, y)) / (2 * h),
            (self.u(x, y + h) - self.u(x, y - h)) / (2 * h),
        )

    def boundary_max(self, n: int = 50) -> float:
        """Largest ``|u|`` over ``n`` sample points of the curve."""
        pts = self.curve.sample(n)
        return float(np.max(np.abs(self(pts.real, pts.imag))))


def _gauge(op: EllipticOperator):
    a, b, mu2 = gauge_split(op)

    def g(x, y):
        return np.exp(-(a * x + b * y) / 2.0)

    return a, b, mu2, g


def _wrap(op, curve, w, wx, wy, label, params):
    """Build ``u = g w`` from the reduced solution ``w`` and its gradient."""
    a, b, _, g = _gauge(op)

    def u(x, y):
        return g(x, y) * w(x, y)

    def ux(x, y):
        return g(x, y) * (wx(x, y) - 0.5 * a * w(x, y))

    def uy(x, y):
        return g(x, y) * (wy(x, y) - 0.5 * b * w(x, y))

    return SolutionField(u, ux, uy, op, curve, label, params)


def _line_frame(line: Line):
    """Signed normal coordinate ``eta`` and tangential ``xi`` for the line."""
    nrm = np.sqrt(line.norm2)
    al, be, de = line.alpha / nrm, line.beta / nrm, line.delta / nrm

    def eta(x, y):
        return al * x + be * y + de

    def xi(x, y):
        return -be * x + al * y

    # d(xi)/dx, d(xi)/dy, d(eta)/dx, d(eta)/dy
    return eta, xi, (-be, al, al, be)


def line_mode(op: EllipticOperator, line: Line, nu: float = 0.5, parity: str = "cos") -> SolutionField:
    """Separable mode ``g * X(eta) * T(nu xi)`` vanishing on the line ``eta = 0``.

    ``X`` is ``sin(k eta)`` when ``mu2 - nu^2 = k^2 > 0``, ``sinh(k eta)`` when
    it is negative and ``eta`` when it is zero.
    """
    if parity not in ("sin", "cos"):
        raise DomainError("parity must be 'sin' or 'cos'")
    _, _, mu2, _ = _gauge(op)
    eta, xi, (xix, xiy, etx, ety) = _line_frame(line)
    disc = mu2 - nu * nu
    k = np.sqrt(abs(disc))
    if abs(disc) <= 1e-14:
        X, dX = (lambda e: e), (lambda e: np.ones_like(e))
    elif disc > 0:
        X, dX = (lambda e: np.sin(k * e)), (lambda e: k * np.cos(k * e))
    else:
        X, dX = (lambda e: np.sinh(k * e)), (lambda e: k * np.cosh(k * e))
    if parity == "cos":
        T, dT = (lambda s: np.cos(nu * s)), (lambda s: -nu * np.sin(nu * s))
    else:
        T, dT = (lambda s: np.sin(nu * s)), (lambda s: nu * np.cos(nu * s))

    def w(x, y):
        return X(eta(x, y)) * T(xi(x, y))

    def wx(x, y):
        e, s = eta(x, y), xi(x, y)
        return dX(e) * etx * T(s) + X(e) * dT(s) * xix

    def wy(x, y):
        e, s = eta(x, y), xi(x, y)
        return dX(e) * ety * T(s) + X(e) * dT(s) * xiy

    label = f"line:nu={nu:g}:{parity}"
    return _wrap(op, line, w, wx, wy, label, {"nu": nu, "parity": parity, "k2": disc})


def harmonic_line_mode(op: EllipticOperator, line: Line, n: int = 3) -> SolutionField:
    """``g * Im((xi + i eta)^n)``, valid when ``mu2 = 0`` (Laplace or gauge case)."""
    _, _, mu2, _ = _gauge(op)
    if abs(mu2) > 1e-12:
        raise DomainError("harmonic line mode requires mu2 = 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    eta, xi, (xix, xiy, etx, ety) = _line_frame(line)

    def zeta_loc(x, y):
        return xi(x, y) + 1j * eta(x, y)

    def w(x, y):
        return np.imag(zeta_loc(x, y) ** n)

    def dw(x, y):
        return n * zeta_loc(x, y) ** (n - 1)

    def wx(x, y):
        return np.imag(dw(x, y) * (xix + 1j * etx))

    def wy(x, y):
        return np.imag(dw(x, y) * (xiy + 1j * ety))

    return _wrap(op, line, w, wx, wy, f"line:harmonic:n={n}", {"n": n})


def circle_mode(op: EllipticOperator, circle: Circle, n: int = 1, angular: str = "cos") -> SolutionField:
    """Mode vanishing on ``|z - c| = rho``.

    For ``mu2 > 0`` the radial factor is the cross product
    ``J_n(mu r) Y_n(mu rho) - Y_n(mu r) J_n(mu rho)``; for ``mu2 = 0`` it is
    ``(r/rho)^n - (rho/r)^n``.
    """
    if n < 1:
        raise DomainError("circle modes need n >= 1")
    if angular not in ("cos", "sin"):
        raise DomainError("angular must be 'cos' or 'sin'")
    _, _, mu2, _ = _gauge(op)
    c, rho = circle.center, circle.radius

    if abs(mu2) <= 1e-12:
        def radial(r):
            return (r / rho) ** n - (rho / r) ** n

        def radial_d(r):
            return n * ((r / rho) ** n + (rho / r) ** n) / r

        kind = "laplace"
    elif mu2 > 0:
        mu = np.sqrt(mu2)
        jr, yr = bessel.cylinder("J", n, mu * rho), bessel.cylinder("Y", n, mu * rho)

        def radial(r):
            return bessel.jn(n, mu * r) * yr - bessel.yn(n, mu * r) * jr

        def radial_d(r):
            return mu * (bessel.jn_prime(n, mu * r) * yr - bessel.yn_prime(n, mu * r) * jr)

        kind = "helmholtz"
    else:
        raise DomainError("circle modes require mu2 >= 0 after the gauge split")

    trig, dtrig = (np.cos, lambda t: -np.sin(t)) if angular == "cos" else (np.sin, np.cos)

    def polar(x, y):
        dx, dy = x - c.real, y - c.imag
        return np.hypot(dx, dy), np.arctan2(dy, dx)

    def w(x, y):
        r, th = polar(x, y)
        return radial(r) * trig(n * th)

    def grad_w(x, y):
        r, th = polar(x, y)
        wr = radial_d(r) * trig(n * th)
        wt = n * radial(r) * dtrig(n * th) / r
        return wr * np.cos(th) - wt * np.sin(th), wr * np.sin(th) + wt * np.cos(th)

    label = f"circle:{kind}:n={n}:{angular}"
    return _wrap(op, circle, w, lambda x, y: grad_w(x, y)[0], lambda x, y: grad_w(x, y)[1], label,
                 {"n": n, "angular": angular, "mu2": mu2})


def pde_residual(op: EllipticOperator, u, p, h: float = 1e-3, curve: Optional[AnalyticCurve] = None) -> float:
    """``|L u(p)|`` from the 5-point Laplacian and central first differences.

    If ``curve`` has a finite scale and the stencil would reach a singular
    point (the circle center), a :class:`ValidityError` is raised.
    """
    x, y = float(p[0]), float(p[1])
    if isinstance(curve, Circle) and abs(complex(x, y) - curve.center) <= 2 * h:
        raise ValidityError("stencil reaches the circle center")
    f = u if callable(u) else u.u
    c0 = f(np.float64(x), np.float64(y))
    fxp, fxm = f(np.float64(x + h), np.float64(y)), f(np.float64(x - h), np.float64(y))
    fyp, fym = f(np.float64(x), np.float64(y + h)), f(np.float64(x), np.float64(y - h))
    lap = (fxp + fxm + fyp + fym - 4 * c0) / (h * h)
    ux = (fxp - fxm) / (2 * h)
    uy = (fyp - fym) / (2 * h)
    val = lap + op.a(x, y) * ux + op.b(x, y) * uy + op.c(x, y) * c0
    return float(abs(val))


# ---------------------------------------------------------------------------
# Field labels used by the CLI, e.g. "circle:helmholtz:n=1" or "line:nu=0.5"

NAMED_OPERATORS = {
    "laplace": lambda p: EllipticOperator.laplace(),
    "helmholtz": lambda p: EllipticOperator.helmholtz(float(p.get("lam", 1.0))),
    "gauge": lambda p: EllipticOperator.constant(1.0, 0.5, 0.3125),
}


def parse_label(label: str) -> tuple:
    """Split ``kind[:operator][:key=value...]`` into ``(kind, operator_name, params)``."""
    parts = [t for t in label.strip().split(":") if t]
    if not parts or parts[0] not in ("circle", "line"):
        raise ConfigError(f"field label must start with 'circle' or 'line': {label!r}")
    kind, opname, params = parts[0], None, {}
    for tok in parts[1:]:
        m = re.fullmatch(r"([a-z_]+)=([-+0-9.eE]+|[a-z]+)", tok)
        if m:
            params[m.group(1)] = m.group(2)
        elif tok in NAMED_OPERATORS or tok == "harmonic":
            if tok == "harmonic":
                params["harmonic"] = True
            else:
                opname = tok
        elif tok in ("sin", "cos"):
            params["trig"] = tok
        else:
            raise ConfigError(f"unrecognised token {tok!r} in field label {label!r}")
    return kind, opname, params


def make_field(label: str, op: Optional[EllipticOperator] = None, curve: Optional[AnalyticCurve] = None) -> SolutionField:
    """Construct a manufactured field from a label.

    A named operator in the label overrides ``op``; a missing curve defaults to
    the unit circle or the line ``y = 0``.
    """
    kind, opname, params = parse_label(label)
    if opname is not None:
        op = NAMED_OPERATORS[opname](params)
    if op is None:
        raise ConfigError(f"field label {label!r} names no operator and none was configured")
    if curve is None:
        curve = Circle(0j, 1.0) if kind == "circle" else Line(0.0, 1.0, 0.0)
    if curve.kind != kind:
        raise ConfigError(f"field label {label!r} does not match curve kind {curve.kind!r}")
    try:
        if kind == "circle":
            return circle_mode(op, curve, int(params.get("n", 1)), params.get("trig", "cos"))
        _, _, mu2 = gauge_split(op)
        if params.get("harmonic") or (abs(mu2) <= 1e-12 and "nu" not in params):
            return harmonic_line_mode(op, curve, int(params.get("n", 3)))
        return line_mode(op, curve, float(params.get("nu", 0.5)), params.get("trig", "cos"))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def default_field(op: EllipticOperator, curve: AnalyticCurve) -> SolutionField:
    return make_field(curve.kind, op, curve)
