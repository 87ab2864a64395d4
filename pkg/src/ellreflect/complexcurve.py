"""Real-analytic curves, their Schwarz functions, and the reflection map.

A curve Gamma is described by its Schwarz function ``S``: the analytic
function with ``S(z) = conj(z)`` for ``z`` on Gamma.  Its inverse ``S~``
satisfies ``S~(S(z)) = z``, and the anti-conformal reflection across Gamma is
``R(z) = conj(S(z))``.

Built-in curves are lines ``alpha*x + beta*y + delta = 0`` and circles.  Other
curves can be supplied through :class:`SchwarzCurve` as an explicit pair of
analytic evaluators plus a validity radius.

All evaluators accept numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, DomainError, SingularityError
from .quad import taylor_coefficients

ON_CURVE_TOL = 1e-9


@dataclass(frozen=True)
class CPoint:
    """A point of C^2 in characteristic coordinates ``z = x + iy``, ``zeta = x - iy``."""

    z: complex
    zeta: complex

    @classmethod
    def from_real(cls, x: float, y: float) -> "CPoint":
        return cls(complex(x, y), complex(x, -y))

    @classmethod
    def coerce(cls, p) -> "CPoint":
        if isinstance(p, CPoint):
            return p
        if isinstance(p, (complex, np.complexfloating)):
            return cls(complex(p), complex(p).conjugate())
        x, y = p
        return cls.from_real(float(x), float(y))

    def is_real(self, tol: float = 1e-12) -> bool:
        return abs(self.zeta - self.z.conjugate()) <= tol * max(1.0, abs(self.z))

    @property
    def x(self) -> complex:
        return (self.z + self.zeta) / 2

    @property
    def y(self) -> complex:
        return (self.z - self.zeta) / 2j

    def real_xy(self) -> tuple:
        """``(x, y)`` of a real-slice point."""
        return (self.z.real, self.z.imag)


class AnalyticCurve:
    """Base class.  Subclasses implement the Schwarz pair and geometry helpers."""

    kind = "abstract"

    # Schwarz function and inverse --------------------------------------
    def schwarz(self, z):
        raise NotImplementedError

    def schwarz_inverse(self, zeta):
        raise NotImplementedError

    def schwarz_deriv(self, z):
        raise NotImplementedError

    def schwarz_inverse_deriv(self, zeta):
        raise NotImplementedError

    def schwarz_jet(self, z, order: int) -> np.ndarray:
        """Taylor coefficients of ``S`` at ``z``, shape ``z.shape + (order + 1,)``."""
        raise NotImplementedError

    def schwarz_inverse_jet(self, zeta, order: int) -> np.ndarray:
        raise NotImplementedError

    # Real geometry ------------------------------------------------------
    @property
    def scale(self) -> float:
        """Length scale used by the validity guard (``inf`` for lines)."""
        raise NotImplementedError

    def defining(self, x, y):
        """Defining function ``f`` with Gamma = {f = 0}; changes sign across Gamma."""
        raise NotImplementedError

    def distance(self, x, y):
        raise NotImplementedError

    def project(self, x: float, y: float) -> tuple:
        raise NotImplementedError

    def sample(self, n: int, spread: float = 1.0) -> np.ndarray:
        """``n`` points of Gamma as complex numbers."""
        raise NotImplementedError

    def contains(self, x, y, tol: float = ON_CURVE_TOL):
        return np.abs(self.defining(x, y)) <= tol

    def to_spec(self) -> dict:
        raise NotImplementedError


def _check_finite(value, what: str):
    if not np.all(np.isfinite(value)):
        raise SingularityError(f"{what} evaluated at a singular point")
    return value


@dataclass(frozen=True)
class Line(AnalyticCurve):
    """The line ``alpha*x + beta*y + delta = 0``."""

    alpha: float
    beta: float
    delta: float = 0.0
    kind = "line"

    def __post_init__(self):
        if self.alpha == 0 and self.beta == 0:
            raise DomainError("degenerate line: alpha and beta both zero")

    @property
    def norm2(self) -> float:
        return self.alpha**2 + self.beta**2

    @property
    def m(self) -> complex:
        a, b = self.alpha, self.beta
        return complex(b * b - a * a, 2 * a * b) / self.norm2

    @property
    def q(self) -> complex:
        a, b, d = self.alpha, self.beta, self.delta
        return complex(-2 * a * d, 2 * b * d) / self.norm2

    def schwarz(self, z):
        return self.m * np.asarray(z) + self.q

    def schwarz_inverse(self, zeta):
        return (np.asarray(zeta) - self.q) / self.m

    def schwarz_deriv(self, z):
        return np.full(np.shape(z), self.m, dtype=complex)

    def schwarz_inverse_deriv(self, zeta):
        return np.full(np.shape(zeta), 1.0 / self.m, dtype=complex)

    def _affine_jet(self, value, slope, order):
        value = np.asarray(value, dtype=complex)
        out = np.zeros(value.shape + (order + 1,), dtype=complex)
        out[..., 0] = value
        if order >= 1:
            out[..., 1] = slope
        return out

    def schwarz_jet(self, z, order):
        return self._affine_jet(self.schwarz(z), self.m, order)

    def schwarz_inverse_jet(self, zeta, order):
        return self._affine_jet(self.schwarz_inverse(zeta), 1.0 / self.m, order)

    @property
    def scale(self) -> float:
        return float("inf")

    def defining(self, x, y):
        return self.alpha * np.asarray(x) + self.beta * np.asarray(y) + self.delta

    def distance(self, x, y):
        return np.abs(self.defining(x, y)) / np.sqrt(self.norm2)

    def project(self, x, y):
        t = self.defining(x, y) / self.norm2
        return (float(x - t * self.alpha), float(y - t * self.beta))

    def sample(self, n, spread=1.0):
        x0, y0 = self.project(0.0, 0.0)
        t = np.linspace(-spread, spread, n)
        nrm = np.sqrt(self.norm2)
        return (x0 - t * self.beta / nrm) + 1j * (y0 + t * self.alpha / nrm)

    def to_spec(self):
        return {"kind": "line", "alpha": self.alpha, "beta": self.beta, "delta": self.delta}


@dataclass(frozen=True)
class Circle(AnalyticCurve):
    """Circle ``|z - center| = radius`` with ``S(z) = conj(c) + r^2 / (z - c)``."""

    center: complex = 0j
    radius: float = 1.0
    kind = "circle"

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("circle radius must be positive")
        object.__setattr__(self, "center", complex(self.center))

    def _shift(self, w, c, what):
        d = np.asarray(w) - c
        if np.any(d == 0):
            raise SingularityError(f"{what} is singular at the circle center")
        return d

    def schwarz(self, z):
        d = self._shift(z, self.center, "S")
        return self.center.conjugate() + self.radius**2 / d

    def schwarz_inverse(self, zeta):
        d = self._shift(zeta, self.center.conjugate(), "inverse S")
        return self.center + self.radius**2 / d

    def schwarz_deriv(self, z):
        d = self._shift(z, self.center, "S'")
        return -self.radius**2 / d**2

    def schwarz_inverse_deriv(self, zeta):
        d = self._shift(zeta, self.center.conjugate(), "inverse S'")
        return -self.radius**2 / d**2

    def _inversion_jet(self, w, c_in, c_out, order):
        d = self._shift(w, c_in, "Schwarz jet")[..., None]
        k = np.arange(order + 1)
        out = self.radius**2 * (-1.0) ** k / d ** (k + 1)
        out[..., 0] += c_out
        return out

    def schwarz_jet(self, z, order):
        return self._inversion_jet(z, self.center, self.center.conjugate(), order)

    def schwarz_inverse_jet(self, zeta, order):
        return self._inversion_jet(zeta, self.center.conjugate(), self.center, order)

    @property
    def scale(self) -> float:
        return self.radius

    def defining(self, x, y):
        return (np.asarray(x) - self.center.real) ** 2 + (np.asarray(y) - self.center.imag) ** 2 - self.radius**2

    def distance(self, x, y):
        return np.abs(np.hypot(np.asarray(x) - self.center.real, np.asarray(y) - self.center.imag) - self.radius)

    def project(self, x, y):
        d = complex(x, y) - self.center
        if d == 0:
            raise SingularityError("radial projection undefined at the circle center")
        e = self.center + self.radius * d / abs(d)
        return (e.real, e.imag)

    def sample(self, n, spread=1.0):
        t = 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * t)

    def to_spec(self):
        return {"kind": "circle", "cx": self.center.real, "cy": self.center.imag, "r": self.radius}


@dataclass(frozen=True, eq=False)
class SchwarzCurve(AnalyticCurve):
    """User-supplied curve given by its Schwarz pair.

    ``S`` and ``S_inv`` must be vectorized analytic functions; the derivatives
    are optional (``S_inv'`` defaults to ``1 / S'(S_inv)``, and ``S'`` to a
    contour derivative).  ``validity_radius`` bounds the distance from Gamma
    at which the pair may be evaluated; ``base_point`` is any point of Gamma
    and ``spread`` sets the parameter range used by :meth:`sample`.
    """

    S: Callable
    S_inv: Callable
    validity_radius: float
    base_point: complex
    S_prime: Optional[Callable] = None
    S_inv_prime: Optional[Callable] = None
    jet_radius: float = field(default=0.0)
    kind = "schwarz"

    def __post_init__(self):
        if not self.validity_radius > 0:
            raise DomainError("validity_radius must be positive")
        if self.jet_radius <= 0:
            object.__setattr__(self, "jet_radius", 0.25 * self.validity_radius)

    def schwarz(self, z):
        return _check_finite(np.asarray(self.S(np.asarray(z, dtype=complex))), "S")

    def schwarz_inverse(self, zeta):
        return _check_finite(np.asarray(self.S_inv(np.asarray(zeta, dtype=complex))), "inverse S")

    def schwarz_deriv(self, z):
        if self.S_prime is not None:
            return np.asarray(self.S_prime(np.asarray(z, dtype=complex)))
        return self.schwarz_jet(z, 1)[..., 1]

    def schwarz_inverse_deriv(self, zeta):
        if self.S_inv_prime is not None:
            return np.asarray(self.S_inv_prime(np.asarray(zeta, dtype=complex)))
        return 1.0 / self.schwarz_deriv(self.schwarz_inverse(zeta))

    def schwarz_jet(self, z, order):
        return taylor_coefficients(self.schwarz, z, order, self.jet_radius)

    def schwarz_inverse_jet(self, zeta, order):
        return taylor_coefficients(self.schwarz_inverse, zeta, order, self.jet_radius)

    @property
    def scale(self) -> float:
        return 4.0 * self.validity_radius

    def _gap(self, z):
        # vanishes exactly on the real points of Gamma
        return np.conj(z) - self.schwarz(z)

    def defining(self, x, y):
        """Signed gap relative to the normal direction at the nearest sample."""
        z = np.asarray(x) + 1j * np.asarray(y)
        g = self._gap(z)
        # conj(z) - S(z) ~ -2i * conj(n) * (signed distance) near Gamma, where n
        # is the unit tangent; the tangent satisfies S'(z) = conj(n)/n.
        sp = self.schwarz_deriv(z)
        n = 1.0 / np.sqrt(sp)
        return np.real(1j * g * n) / 2

    def distance(self, x, y):
        return np.abs(self.defining(x, y))

    def project(self, x, y, tol: float = 1e-15):
        """Root of the gap on the chord from ``(x, y)`` to its reflection."""
        p = complex(x, y)
        r = np.conj(self.schwarz(p))
        if abs(r - p) <= tol:
            return (p.real, p.imag)
        g0 = self._gap(p)

        def phase(t):
            w = p + t * (r - p)
            return float(np.real(self._gap(w) * np.conj(g0)))

        lo, hi = 0.0, 1.0
        f_lo = phase(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = phase(mid)
            if (fm > 0) == (f_lo > 0):
                lo, f_lo = mid, fm
            else:
                hi = mid
            if hi - lo < tol:
                break
        e = p + 0.5 * (lo + hi) * (r - p)
        return (e.real, e.imag)

    def sample(self, n, spread=1.0):
        # march along Gamma by projecting offsets from the base point along the tangent
        sp = complex(self.schwarz_deriv(self.base_point))
        tangent = 1.0 / np.sqrt(sp)
        pts = []
        for t in np.linspace(-spread, spread, n) * self.validity_radius:
            q = self.base_point + t * tangent + 1e-3 * self.validity_radius * 1j * tangent
            pts.append(complex(*self.project(q.real, q.imag)))
        return np.array(pts)

    def to_spec(self):
        return {"kind": "schwarz", "validity_radius": self.validity_radius}


# ---------------------------------------------------------------------------
# Functional API


def schwarz(curve: AnalyticCurve, z):
    return curve.schwarz(z)


def schwarz_inverse(curve: AnalyticCurve, zeta):
    return curve.schwarz_inverse(zeta)


def schwarz_deriv(curve: AnalyticCurve, z):
    return curve.schwarz_deriv(z)


def reflect_point(curve: AnalyticCurve, p) -> tuple:
    """Reflection ``R(p) = conj(S(z0))`` as a real point ``(x, y)``."""
    x, y = p
    q = np.conj(curve.schwarz(complex(x, y)))
    q = complex(q)
    return (q.real, q.imag)


def anchor_on_curve(curve: AnalyticCurve, q) -> tuple:
    """Nearest point of Gamma to ``q`` (orthogonal or radial projection)."""
    x, y = q
    return curve.project(float(x), float(y))


@dataclass(frozen=True)
class ReflectionContext:
    source: CPoint
    reflected: CPoint
    anchor: tuple
    curve: AnalyticCurve

    @classmethod
    def build(cls, curve: AnalyticCurve, p) -> "ReflectionContext":
        x, y = p
        src = CPoint.from_real(x, y)
        zq = complex(curve.schwarz_inverse(src.zeta))
        zetaq = complex(curve.schwarz(src.z))
        refl = CPoint(zq, zetaq)
        anchor = anchor_on_curve(curve, (zq.real, zq.imag))
        return cls(src, refl, anchor, curve)

    @property
    def q_xy(self) -> tuple:
        return (self.reflected.z.real, self.reflected.z.imag)


def curve_from_spec(spec: dict) -> AnalyticCurve:
    """Build a curve from a config dictionary (``kind`` = ``line`` or ``circle``)."""
    if not isinstance(spec, dict):
        raise ConfigError("curve spec must be an object")
    kind = spec.get("kind")
    try:
        if kind == "line":
            return Line(float(spec["alpha"]), float(spec["beta"]), float(spec.get("delta", 0.0)))
        if kind == "circle":
            center = complex(float(spec.get("cx", 0.0)), float(spec.get("cy", 0.0)))
            return Circle(center, float(spec.get("r", 1.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad curve spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown curve kind {kind!r}")

