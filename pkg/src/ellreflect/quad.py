"""Quadrature over real polylines and complex segments.

Contents
--------
* ``integrate_path``   adaptive Simpson for a 1-form ``P dx + Q dy`` along a
                       piecewise-linear path (vectorized level by level).
* ``closed_contour``   periodic trapezoid rule on a circle; spectrally
                       accurate for analytic integrands.
* ``segment_integral`` Gauss-Legendre rule along a straight complex segment.
* ``cauchy_derivative`` derivatives of analytic functions from contour samples.
* Chebyshev-Lobatto nodes with cumulative integration / differentiation
  matrices, used by the Goursat and Volterra solvers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from numpy.polynomial import legendre as _leg

from .errors import QuadratureError, ValidityError


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    evaluations: int = 0


@dataclass(frozen=True)
class Path:
    """Piecewise-linear path through real points (stored as complex x + iy)."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValidityError("a path needs at least two vertices")
        for v0, v1 in zip(verts[:-1], verts[1:]):
            if v0 == v1:
                raise ValidityError("consecutive path vertices must differ")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_points(cls, points: Sequence) -> "Path":
        verts = []
        for p in points:
            if isinstance(p, (complex, float, int, np.number)):
                verts.append(complex(p))
            else:
                verts.append(complex(p[0], p[1]))
        return cls(tuple(verts))

    @property
    def segments(self):
        return list(zip(self.vertices[:-1], self.vertices[1:]))

    @property
    def length(self) -> float:
        return float(sum(abs(b - a) for a, b in self.segments))

    def as_list(self):
        return [[v.real, v.imag] for v in self.vertices]


class FormEvaluator:
    """Wraps ``func(x, y) -> (P, Q)`` describing the 1-form ``P dx + Q dy``.

    ``func`` must accept numpy arrays and return arrays of the same shape.
    """

    def __init__(self, func: Callable):
        self.func = func

    def __call__(self, x, y):
        return self.func(x, y)

    @classmethod
    def from_holomorphic(cls, f: Callable) -> "FormEvaluator":
        """Form ``f(z) dz`` for a vectorized function of ``z = x + iy``."""

        def func(x, y):
            vals = f(np.asarray(x) + 1j * np.asarray(y))
            return vals, 1j * vals

        return cls(func)


def _segment_integrand(form, a: complex, b: complex):
    d = b - a

    def g(t):
        p = a + t * d
        P, Q = form(p.real, p.imag)
        return np.asarray(P) * d.real + np.asarray(Q) * d.imag

    return g


def _adaptive_simpson(g, tol: float, max_depth: int, initial: int = 8):
    edges = np.linspace(0.0, 1.0, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    f_lo, f_mid, f_hi = (np.asarray(v, dtype=complex) for v in np.split(g(np.concatenate([lo, mid, hi])), 3))
    nevals = 3 * initial
    total = 0.0 + 0.0j
    err = 0.0
    for depth in range(max_depth + 1):
        h = hi - lo
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        f_q1, f_q3 = np.split(np.asarray(g(np.concatenate([q1, q3])), dtype=complex), 2)
        nevals += 2 * len(lo)
        s1 = h / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
        s2 = h / 12.0 * (f_lo + 4.0 * f_q1 + 2.0 * f_mid + 4.0 * f_q3 + f_hi)
        est = np.abs(s2 - s1) / 15.0
        ok = est <= tol * h
        if depth == max_depth:
            ok[:] = True
            if np.any(est > tol * h):
                raise QuadratureError(
                    f"adaptive Simpson exceeded depth {max_depth}", achieved=float(err + est.sum())
                )
        total += np.sum(s2[ok] + (s2[ok] - s1[ok]) / 15.0)
        err += float(est[ok].sum())
        if ok.all():
            break
        bad = ~ok
        lo_b, mid_b, hi_b = lo[bad], mid[bad], hi[bad]
        fl, fq1, fm, fq3, fh = f_lo[bad], f_q1[bad], f_mid[bad], f_q3[bad], f_hi[bad]
        lo = np.concatenate([lo_b, mid_b])
        hi = np.concatenate([mid_b, hi_b])
        mid = np.concatenate([0.5 * (lo_b + mid_b), 0.5 * (mid_b + hi_b)])
        f_lo = np.concatenate([fl, fm])
        f_hi = np.concatenate([fm, fh])
        f_mid = np.concatenate([fq1, fq3])
    return total, err, nevals


def integrate_path(form: FormEvaluator, path: Path, tol: float = 1e-10, max_depth: int = 30) -> QuadResult:
    """Integrate ``P dx + Q dy`` along ``path`` with adaptive Simpson.

    Each segment receives a share of ``tol`` proportional to its length, and
    within a segment every panel must satisfy the Richardson estimate
    ``|S2 - S1| / 15 <= tol_seg * h`` for parameter width ``h``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    length = path.length
    total = 0.0 + 0.0j
    err = 0.0
    nevals = 0
    for a, b in path.segments:
        seg_tol = tol * abs(b - a) / length
        val, e, n = _adaptive_simpson(_segment_integrand(form, a, b), seg_tol, max_depth)
        total += val
        err += e
        nevals += n
    return QuadResult(complex(total), err, nevals)


def closed_contour(form: FormEvaluator, center, rho: float, n: int = 128) -> QuadResult:
    """Counterclockwise trapezoid rule for ``P dx + Q dy`` on a circle.

    The error estimate is the difference from the rule on every other node.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if n < 64:
        raise ValueError("closed_contour needs n >= 64")
    c = complex(center[0], center[1]) if not np.isscalar(center) else complex(center)
    theta = 2 * np.pi * np.arange(n) / n
    x = c.real + rho * np.cos(theta)
    y = c.imag + rho * np.sin(theta)
    P, Q = form(x, y)
    integrand = np.asarray(P) * (-rho * np.sin(theta)) + np.asarray(Q) * (rho * np.cos(theta))
    full = integrand.sum() * 2 * np.pi / n
    half = integrand[::2].sum() * 4 * np.pi / n
    return QuadResult(complex(full), float(abs(full - half)), n)


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights on [0, 1]."""
    x, w = _leg.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def segment_integral(f: Callable, a, b, n: int = 16):
    """Integral of a vectorized analytic ``f`` along the segment ``a -> b``.

    ``a`` and ``b`` may be arrays (broadcast together); the result has their
    broadcast shape.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    t, w = gauss_legendre(n)
    d = b - a
    pts = a[..., None] + d[..., None] * t
    return d * np.sum(np.asarray(f(pts)) * w, axis=-1)


def cauchy_derivative(f: Callable, z, order: int = 1, radius: float = 1e-2, n: int = 16):
    """``order``-th derivative of analytic ``f`` at ``z`` via the Cauchy integral.

    Uses the ``n``-point trapezoid rule on ``|w - z| = radius``, which is
    spectrally accurate when ``f`` is analytic on a larger disk.
    """
    z = np.asarray(z, dtype=complex)
    theta = 2 * np.pi * np.arange(n) / n
    ring = radius * np.exp(1j * theta)
    vals = np.asarray(f(z[..., None] + ring))
    weights = np.exp(-1j * order * theta)
    return factorial(order) * np.sum(vals * weights, axis=-1) / (n * radius**order)


def taylor_coefficients(f: Callable, z, order: int, radius: float, n: int = 64):
    """Taylor coefficients ``c_0..c_order`` of analytic ``f`` at ``z`` (FFT of ring samples)."""
    z = np.asarray(z, dtype=complex)
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.asarray(f(z[..., None] + radius * np.exp(1j * theta)))
    coeffs = np.fft.fft(vals, axis=-1) / n
    return coeffs[..., : order + 1] / radius ** np.arange(order + 1)


@lru_cache(maxsize=None)
def cheb_lobatto(n: int) -> np.ndarray:
    """Chebyshev-Lobatto nodes on [0, 1], increasing, endpoints included."""
    return (1.0 - np.cos(np.pi * np.arange(n) / (n - 1))) / 2.0


@lru_cache(maxsize=None)
def _cheb_vander_inv(n: int):
    x = 2 * cheb_lobatto(n) - 1
    return np.linalg.inv(_cheb.chebvander(x, n - 1))


@lru_cache(maxsize=None)
def cumint_matrix(n: int) -> np.ndarray:
    """Matrix ``M`` with ``(M f)_i ~ integral_0^{s_i} f(s) ds`` on Lobatto nodes."""
    x = 2 * cheb_lobatto(n) - 1
    cols = np.empty((n, n))
    for j in range(n):
        cj = np.zeros(n)
        cj[j] = 1.0
        cols[:, j] = _cheb.chebval(x, _cheb.chebint(cj, lbnd=-1)) / 2.0
    M = cols @ _cheb_vander_inv(n)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def diff_matrix(n: int) -> np.ndarray:
    """Spectral differentiation on Lobatto nodes of [0, 1]."""
    x = 2 * cheb_lobatto(n) - 1
    cols = np.empty((n, n))
    for j in range(n):
        cj = np.zeros(n)
        cj[j] = 1.0
        cols[:, j] = _cheb.chebval(x, _cheb.chebder(cj)) * 2.0
    D = cols @ _cheb_vander_inv(n)
    D.setflags(write=False)
    return D


def cheb_interp(values: np.ndarray, s, axis: int = 0) -> np.ndarray:
    """Evaluate the Lobatto interpolant of ``values`` (along ``axis``) at ``s`` in [0, 1]."""
    values = np.moveaxis(np.asarray(values), axis, 0)
    n = values.shape[0]
    coeffs = np.tensordot(_cheb_vander_inv(n), values, axes=(1, 0))
    return _cheb.chebval(2 * np.asarray(s) - 1, coeffs)
