"""Second-order elliptic operators ``L u = u_xx + u_yy + a u_x + b u_y + c u``.

In characteristic variables ``z = x + iy``, ``zeta = x - iy`` the operator
becomes ``4 (u_{z zeta} + A u_z + B u_zeta + C u)`` with

    A = (a + i b) / 4,   B = (a - i b) / 4,   C = c / 4,

and its formal adjoint is ``L*v = v_{z zeta} - (A v)_z - (B v)_zeta + C v``.

This module provides the operator type, its characteristic coefficients, the
Riemann function (closed form for constant coefficients and a numerical
Goursat solver for analytic ones), and the logarithmic series for the
fundamental solution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Optional

import numpy as np

from . import quad
from .complexcurve import CPoint
from .errors import ConfigError, ConvergenceError, DomainError, NonConstantOperatorError, OnCharacteristicError

DEFAULT_K = 12
EULER_GAMMA = 0.57721566490153286061


def _const_fn(value):
    def f(x, y):
        return np.full(np.broadcast_shapes(np.shape(x), np.shape(y)), value, dtype=np.result_type(x, y, float))

    return f


@dataclass(frozen=True, eq=False)
class EllipticOperator:
    """Coefficients ``a, b, c`` of ``L``.

    Constant operators carry their values in ``constants``; variable ones
    carry evaluators that must accept complex arguments (they are analytic
    expressions continued into C^2 by the Goursat solver).
    """

    a: Callable
    b: Callable
    c: Callable
    constants: Optional[tuple] = None
    label: str = ""

    @classmethod
    def constant(cls, a: float = 0.0, b: float = 0.0, c: float = 0.0) -> "EllipticOperator":
        a, b, c = float(a), float(b), float(c)
        return cls(_const_fn(a), _const_fn(b), _const_fn(c), (a, b, c), f"const({a:g},{b:g},{c:g})")

    @classmethod
    def laplace(cls) -> "EllipticOperator":
        return cls.constant(0.0, 0.0, 0.0)

    @classmethod
    def helmholtz(cls, lam: float) -> "EllipticOperator":
        return cls.constant(0.0, 0.0, lam * lam)

    @classmethod
    def family(cls, name: str, **params) -> "EllipticOperator":
        """Variable-coefficient operator from :data:`COEFFICIENT_FAMILIES`."""
        if name not in COEFFICIENT_FAMILIES:
            raise ConfigError(f"unknown coefficient family {name!r}")
        try:
            a, b, c = COEFFICIENT_FAMILIES[name](**params)
        except TypeError as exc:
            raise ConfigError(f"bad parameters for family {name!r}: {exc}") from exc
        return cls(a, b, c, None, f"{name}{params}")

    @classmethod
    def from_spec(cls, spec: dict) -> "EllipticOperator":
        if not isinstance(spec, dict):
            raise ConfigError("operator spec must be an object")
        if "family" in spec:
            params = {k: float(v) for k, v in spec.items() if k != "family"}
            return cls.family(spec["family"], **params)
        try:
            return cls.constant(float(spec.get("a", 0.0)), float(spec.get("b", 0.0)), float(spec.get("c", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad operator spec {spec!r}: {exc}") from exc

    @property
    def constant_flag(self) -> bool:
        return self.constants is not None

    def require_constant(self) -> tuple:
        if self.constants is None:
            raise NonConstantOperatorError("this operation supports constant coefficients only")
        return self.constants

    @property
    def is_laplace(self) -> bool:
        return self.constants == (0.0, 0.0, 0.0)

    def to_spec(self) -> dict:
        if self.constants is not None:
            a, b, c = self.constants
            return {"a": a, "b": b, "c": c}
        return {"label": self.label}

    def __repr__(self):
        return f"EllipticOperator({self.label})"


# Built-in variable-coefficient families: each returns evaluators (a, b, c)
# written with numpy ufuncs so they continue analytically to complex x, y.
COEFFICIENT_FAMILIES = {
    "constant": lambda a=0.0, b=0.0, c=0.0: (_const_fn(a), _const_fn(b), _const_fn(c)),
    "linear_c": lambda c0=1.0, c1=0.5: (_const_fn(0.0), _const_fn(0.0), lambda x, y: c0 + c1 * x),
    "exp_c": lambda lam=1.0, k=0.5: (_const_fn(0.0), _const_fn(0.0), lambda x, y: lam**2 * np.exp(k * x)),
    "drift_x": lambda a0=1.0, a1=0.5, c=1.0: (lambda x, y: a0 + a1 * y, _const_fn(0.0), _const_fn(c)),
}


@dataclass(frozen=True, eq=False)
class CharCoeffs:
    """Characteristic coefficients as functions of ``(z, zeta)``.

    ``F = dA/dz + dB/dzeta - C``.  For constant operators the scalar values
    are available as ``A0, B0, C0``.
    """

    A: Callable
    B: Callable
    C: Callable
    F: Callable
    A0: Optional[complex] = None
    B0: Optional[complex] = None
    C0: Optional[float] = None

    @property
    def constant(self) -> bool:
        return self.A0 is not None

    @property
    def kappa(self) -> complex:
        """``AB - C`` for constant coefficients."""
        return self.A0 * self.B0 - self.C0

    def adjoint(self) -> "CharCoeffs":
        """Characteristic coefficients ``(-A, -B, C)`` of the adjoint (constant case)."""
        if not self.constant:
            raise NonConstantOperatorError("adjoint coefficients implemented for constants only")
        A, B, C = -self.A0, -self.B0, self.C0
        return CharCoeffs(_zconst(A), _zconst(B), _zconst(C), _zconst(-C), A, B, C)


def _zconst(value):
    return lambda z, zeta: np.full(np.broadcast_shapes(np.shape(z), np.shape(zeta)), value, dtype=complex)


def _real_args(z, zeta):
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    return (z + zeta) / 2, (z - zeta) / 2j


def char_coeffs(op: EllipticOperator) -> CharCoeffs:
    if op.constant_flag:
        a, b, c = op.constants
        A, B, C = complex(a, b) / 4, complex(a, -b) / 4, c / 4
        return CharCoeffs(_zconst(A), _zconst(B), _zconst(C), _zconst(-C), A, B, C)

    def A(z, zeta):
        x, y = _real_args(z, zeta)
        return (op.a(x, y) + 1j * op.b(x, y)) / 4

    def B(z, zeta):
        x, y = _real_args(z, zeta)
        return (op.a(x, y) - 1j * op.b(x, y)) / 4

    def C(z, zeta):
        x, y = _real_args(z, zeta)
        return op.c(x, y) / 4 + 0j

    def F(z, zeta, h=1e-3):
        dA = quad.cauchy_derivative(lambda w: A(w, zeta), z, 1, h)
        dB = quad.cauchy_derivative(lambda w: B(z, w), zeta, 1, h)
        return dA + dB - C(z, zeta)

    return CharCoeffs(A, B, C, F)


def gauge_split(op: EllipticOperator) -> tuple:
    """``(a, b, mu2)`` with ``mu2 = c - (a^2 + b^2) / 4``.

    ``u = exp(-(a x + b y) / 2) w`` turns ``L u = 0`` into ``(Delta + mu2) w = 0``.
    """
    a, b, c = op.require_constant()
    return a, b, c - (a * a + b * b) / 4.0


def bessel_phi(t, tol: float = 1e-16, max_terms: int = 400):
    """``Phi(t) = sum_k t^k / (k!)^2`` (so ``Phi(-x^2/4) = J_0(x)``), vectorized."""
    t = np.asarray(t, dtype=complex)
    term = np.ones_like(t)
    total = np.ones_like(t)
    for k in range(1, max_terms):
        term = term * t / (k * k)
        total = total + term
        if np.all(np.abs(term) <= tol * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def bessel_phi_prime(t, tol: float = 1e-16, max_terms: int = 400):
    """Derivative of :func:`bessel_phi`: ``sum_k t^k / (k! (k+1)!)``."""
    t = np.asarray(t, dtype=complex)
    term = np.ones_like(t)
    total = np.ones_like(t)
    for k in range(1, max_terms):
        term = term * t / (k * (k + 1))
        total = total + term
        if np.all(np.abs(term) <= tol * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def riemann_const(op: EllipticOperator, p0, p, coeffs: Optional[CharCoeffs] = None):
    """Closed-form Riemann function for constant coefficients.

    ``R = exp(A (zeta - zeta0) + B (z - z0)) * Phi(kappa (z - z0)(zeta - zeta0))``.
    ``p`` may be a :class:`CPoint` or a pair ``(z, zeta)`` of arrays.
    """
    op.require_constant()
    cc = coeffs or char_coeffs(op)
    p0 = CPoint.coerce(p0)
    z, zeta = (p.z, p.zeta) if isinstance(p, CPoint) else p
    s = np.asarray(z) - p0.z
    sg = np.asarray(zeta) - p0.zeta
    out = np.exp(cc.A0 * sg + cc.B0 * s) * bessel_phi(cc.kappa * s * sg)
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class GoursatField:
    """Riemann function sampled on a Chebyshev-Lobatto characteristic grid.

    ``values[i, j]`` is the value at ``(z_nodes[i], zeta_nodes[j])``.
    """

    z_nodes: np.ndarray
    zeta_nodes: np.ndarray
    values: np.ndarray
    iterations: int
    history: tuple

    def at(self, z, zeta):
        """Spectral interpolation to ``(z, zeta)`` inside the rectangle."""
        z0, z1 = self.z_nodes[0], self.z_nodes[-1]
        w0, w1 = self.zeta_nodes[0], self.zeta_nodes[-1]
        s = (z - z0) / (z1 - z0)
        t = (zeta - w0) / (w1 - w0)
        if abs(s.imag) > 1e-12 or abs(t.imag) > 1e-12:
            raise DomainError("point is not on the characteristic rectangle")
        row = quad.cheb_interp(self.values, s.real, axis=0)
        return complex(quad.cheb_interp(row, t.real, axis=0))


def riemann_goursat(op: EllipticOperator, p0, rect, n: int = 24, tol: float = 1e-12, max_iter: int = 60) -> GoursatField:
    """Solve the characteristic Goursat problem for the Riemann function.

    ``rect = (z1, zeta1)`` spans the rectangle ``[z0, z1] x [zeta0, zeta1]``
    (straight complex segments).  The adjoint equation is written as

        v(z, w) = v(z0, w) + v(z, w0) - 1
                  + int_{w0}^{w} [A v](z, t) - [A v](z0, t) dt
                  + int_{z0}^{z} [B v](t, w) - [B v](t, w0) dt
                  - int int C v

    and solved by successive approximation on the Lobatto tensor grid.
    """
    if n < 8:
        raise ValueError("riemann_goursat needs n >= 8")
    p0 = CPoint.coerce(p0)
    z1, zeta1 = rect
    cc = char_coeffs(op)
    s = quad.cheb_lobatto(n)
    dz = complex(z1) - p0.z
    dw = complex(zeta1) - p0.zeta
    Z = p0.z + s * dz
    W = p0.zeta + s * dw
    M = quad.cumint_matrix(n)
    Iz = M * dz
    Iw = M * dw
    ZZ, WW = np.meshgrid(Z, W, indexing="ij")
    A = np.asarray(cc.A(ZZ, WW))
    B = np.asarray(cc.B(ZZ, WW))
    C = np.asarray(cc.C(ZZ, WW))
    # Goursat data along the two characteristics through the source
    edge_w = np.exp(Iw @ A[0, :])
    edge_z = np.exp(Iz @ B[:, 0])
    base = edge_w[None, :] + edge_z[:, None] - 1.0
    v = base.copy()
    history = []
    for it in range(1, max_iter + 1):
        Av = A * v
        Bv = B * v
        new = (
            base
            + (Av - Av[0:1, :]) @ Iw.T
            + Iz @ (Bv - Bv[:, 0:1])
            - Iz @ (C * v) @ Iw.T
        )
        diff = float(np.max(np.abs(new - v)))
        history.append(diff)
        v = new
        if diff < tol:
            return GoursatField(Z, W, v, it, tuple(history))
    raise ConvergenceError(f"Goursat iteration stalled at {history[-1]:.3e}", history)


def f_k(k: int, xi, branch: int = 0):
    """Singular building blocks of the fundamental-solution series.

    ``k <= -1``: ``(-1)^(-k-1) (-k-1)! xi^k``;
    ``k >= 0``: ``xi^k / k! * (log xi - H_k)`` with ``H_k`` the harmonic number
    and the logarithm shifted by ``2 pi i * branch``.
    """
    xi = np.asarray(xi, dtype=complex)
    if k <= -1:
        if np.any(xi == 0):
            raise OnCharacteristicError("f_k pole at xi = 0")
        m = -k - 1
        out = (-1) ** m * factorial(m) * xi**k
    else:
        if np.any(xi == 0):
            raise OnCharacteristicError("logarithm at xi = 0")
        h = sum(1.0 / l for l in range(1, k + 1))
        out = xi**k / factorial(k) * (np.log(xi) + 2j * np.pi * branch - h)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SeriesCoeffs:
    """Coefficients ``alpha_k^j`` of the logarithmic series (constant case).

    Solving the transport equations in closed form gives

        alpha_k^1 = E * (kappa (zeta - zeta0))^k / k!,
        alpha_k^2 = E * (kappa (z - z0))^k / k!,

    with ``E = exp(A (zeta - zeta0) + B (z - z0))``.
    """

    j: int
    K: int
    z0: complex
    zeta0: complex
    A: complex
    B: complex
    kappa: complex
    values: tuple = field(default=(), compare=False)

    def __call__(self, k: int, z, zeta):
        z = np.asarray(z, dtype=complex)
        zeta = np.asarray(zeta, dtype=complex)
        E = np.exp(self.A * (zeta - self.zeta0) + self.B * (z - self.z0))
        other = (zeta - self.zeta0) if self.j == 1 else (z - self.z0)
        return E * (self.kappa * other) ** k / factorial(k)

    def riemann_partial_sum(self, z, zeta, K: Optional[int] = None):
        """``sum_k alpha_k^j psi_j^k / k!``, which reproduces the Riemann function."""
        K = self.K if K is None else K
        psi = (np.asarray(z) - self.z0) if self.j == 1 else (np.asarray(zeta) - self.zeta0)
        return sum(self(k, z, zeta) * psi**k / factorial(k) for k in range(K + 1))


def alpha_coeffs(op: EllipticOperator, p0, K: int = DEFAULT_K) -> tuple:
    op.require_constant()
    cc = char_coeffs(op)
    p0 = CPoint.coerce(p0)
    out = []
    for j in (1, 2):
        sc = SeriesCoeffs(j, K, p0.z, p0.zeta, cc.A0, cc.B0, cc.kappa)
        vals = tuple((lambda k: (lambda z, zeta: sc(k, z, zeta)))(k) for k in range(K + 1))
        out.append(SeriesCoeffs(j, K, p0.z, p0.zeta, cc.A0, cc.B0, cc.kappa, vals))
    return tuple(out)


def fundamental_eval(op: EllipticOperator, p0, p, K: int = DEFAULT_K, branches=(0, 0)):
    """Series fundamental solution ``G = -(G_1 + G_2) / (4 pi)``.

    ``G_j = sum_{k <= K} alpha_k^j f_k(psi_j)`` with ``psi_1 = z - z0``,
    ``psi_2 = zeta - zeta0``.  Returns ``(G, tail)`` where ``tail`` is the
    magnitude of the last retained term pair (a truncation estimate).
    The sum stops early once terms drop below ``1e-16`` relative.
    """
    a1, a2 = alpha_coeffs(op, p0, K)
    p0 = CPoint.coerce(p0)
    p = CPoint.coerce(p)
    psi1, psi2 = p.z - p0.z, p.zeta - p0.zeta
    if psi1 == 0 or psi2 == 0:
        raise OnCharacteristicError("point lies on a characteristic through the source")
    total = 0j
    tail = 0.0
    for k in range(K + 1):
        t = a1(k, p.z, p.zeta) * f_k(k, psi1, branches[0]) + a2(k, p.z, p.zeta) * f_k(k, psi2, branches[1])
        total += complex(t)
        tail = abs(t)
        if k >= 2 and tail <= 1e-16 * abs(total):
            break
    scale = -1.0 / (4 * np.pi)
    return scale * total, abs(scale) * tail


def adjoint_residual(coeffs: CharCoeffs, v: Callable, z, zeta, h: float):
    """Central-difference estimate of ``L*_C v`` at ``(z, zeta)`` with step ``h``.

    Steps are taken independently in ``z`` and ``zeta`` (complex grid stencil),
    so the error is ``O(h^2)`` for analytic ``v``.
    """
    A = lambda zz, ww: coeffs.A(zz, ww) * v(zz, ww)
    B = lambda zz, ww: coeffs.B(zz, ww) * v(zz, ww)
    mixed = (v(z + h, zeta + h) - v(z + h, zeta - h) - v(z - h, zeta + h) + v(z - h, zeta - h)) / (4 * h * h)
    dA = (A(z + h, zeta) - A(z - h, zeta)) / (2 * h)
    dB = (B(z, zeta + h) - B(z, zeta - h)) / (2 * h)
    return mixed - dA - dB + coeffs.C(z, zeta) * v(z, zeta)
