"""Reflected fundamental solution: the functions V_1, V_2 and V = V_1 - V_2.

For a source point ``P = (z0, zeta0)`` and a curve with Schwarz pair
``(S, S~)`` the functions solve ``L*_C V_j = 0`` with ``V_j = R`` (the
Riemann function) on the complexified curve ``z = S~(zeta)``, and with
exponential data on one characteristic through the reflected point ``Q``.
They are expanded as

    V_1 = sum_k beta_k^1 psi1~^k / k!,   psi1~ = S~(zeta) - z0,
    V_2 = sum_k beta_k^2 psi2~^k / k!,   psi2~ = S(z) - zeta0.

Constant coefficients only.  Writing ``E = exp(A (zeta - zeta0) + B (z - z0))``
and ``beta_k = E b_k``, each ``b_k`` is a polynomial in ``w = p - sigma(s)``
whose coefficients are analytic in ``s`` (generic roles below).  The
transport recursion then becomes an exact recursion on those coefficients,
which this module runs on truncated Taylor series ("jets") in ``s``.

Generic roles
-------------
=========  =========  =========
role       V_1        V_2
=========  =========  =========
p          z          zeta
s          zeta       z
sigma      S~         S
p0, s0     z0, zeta0  zeta0, z0
=========  =========  =========

(``p0`` is the source coordinate paired with ``p`` and ``s0`` the one paired
with ``s``.)  A second, independent route solves the Cauchy-Goursat problem
for each ``V_j`` as a Volterra integral equation by Picard iteration; it is
used as an oracle.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import factorial
from typing import Optional

import numpy as np

from . import _jets as jets
from . import quad
from .complexcurve import AnalyticCurve, CPoint
from .errors import BranchTrackingError, ConvergenceError, ValidityError
from .operator import EllipticOperator, bessel_phi, bessel_phi_prime, char_coeffs

K_MAX = 12
BETA_QUAD_MAX = 2


class SeriesDivergenceWarning(RuntimeWarning):
    """Terms of the V-series grow with k: the point is likely outside its disk of convergence."""


@dataclass(frozen=True)
class _Roles:
    j: int
    cp: complex     # coefficient of d/dp in L* (and exponent of E in s)
    cs: complex     # coefficient of d/ds in L* (and exponent of E in p)
    p0: complex
    s0: complex
    sigma_jet: object
    sigma: object
    sigma_deriv: object


def _roles(j: int, curve: AnalyticCurve, A: complex, B: complex, p0: CPoint) -> _Roles:
    if j == 1:
        return _Roles(1, A, B, p0.z, p0.zeta, curve.schwarz_inverse_jet, curve.schwarz_inverse,
                      curve.schwarz_inverse_deriv)
    return _Roles(2, B, A, p0.zeta, p0.z, curve.schwarz_jet, curve.schwarz, curve.schwarz_deriv)


def _coefficient_jets(s, roles: _Roles, kappa: complex, K: int, N: int):
    """Jets in ``s`` of the coefficients ``c[k][m]`` of ``b_k = sum_m c[k][m] w^m``.

    Returns ``(cs, J, Jp)`` where ``J``/``Jp`` are the jets of ``sigma`` and
    ``sigma'``.  The recursion is
        D_n = (n+1) c'_{k,n+1} - (n+2)(n+1) c_{k,n+2} sigma' - kappa c_{k,n},
        c_{k+1,n+1} = -D_n / ((n+1) sigma'),
        c_{k+1,0} = (kappa (s - s0))^{k+1} / (k+1)!.
    """
    J_full = roles.sigma_jet(s, N + 1)
    Jp = jets.deriv(J_full)[..., : N + 1]
    J = J_full[..., : N + 1]
    Jinv = jets.recip(Jp)
    ks = kappa * jets.variable(np.asarray(s) - roles.s0, N)
    one = jets.const(np.ones(np.shape(s)), N)
    cs = [[one]]
    pw = one
    for k in range(K):
        ck = cs[-1]
        pw = jets.mul(pw, ks)
        new = [pw / factorial(k + 1)]
        for n in range(k + 1):
            d = -kappa * ck[n]
            if n + 1 <= k:
                d = d + (n + 1) * jets.deriv(ck[n + 1])
            if n + 2 <= k:
                d = d - (n + 2) * (n + 1) * jets.mul(ck[n + 2], Jp)
            new.append(-jets.mul(d, Jinv) / (n + 1))
        cs.append(new)
    return cs, J, Jp


def _w_series(p, s, roles: _Roles, kappa: complex, K: int):
    """Sum ``W = sum_k b_k psi~^k / k!`` with derivatives; also per-order term sizes."""
    N = K + 4
    p = np.asarray(p, dtype=complex)
    s = np.asarray(s, dtype=complex)
    cs, J, _ = _coefficient_jets(s, roles, kappa, K, N)
    one = jets.const(np.ones(s.shape), N)
    psi = J.copy()
    psi[..., 0] -= roles.p0
    w = -J
    w[..., 0] += p
    W = np.zeros_like(one)
    Wp = np.zeros_like(one)
    terms = []
    psik = one
    for k in range(K + 1):
        wm = one
        bk = np.zeros_like(one)
        dbk = np.zeros_like(one)
        for m in range(k + 1):
            if m >= 1:
                dbk = dbk + m * jets.mul(cs[k][m], wm)
                wm = jets.mul(wm, w)
            bk = bk + jets.mul(cs[k][m], wm)
        term = jets.mul(bk, psik) / factorial(k)
        W = W + term
        Wp = Wp + jets.mul(dbk, psik) / factorial(k)
        terms.append(np.abs(term[..., 0]))
        psik = jets.mul(psik, psi)
    return W[..., 0], Wp[..., 0], W[..., 1], terms


def _exp_factor(A, B, p0: CPoint, z, zeta):
    return np.exp(A * (np.asarray(zeta) - p0.zeta) + B * (np.asarray(z) - p0.z))


def _split(p):
    if isinstance(p, CPoint):
        return p.z, p.zeta
    return p


# ---------------------------------------------------------------------------
# beta coefficients


def beta0(op: EllipticOperator, curve: AnalyticCurve, p0, p, j: int = 1):
    """``beta_0^j``; for constant coefficients both equal ``E``."""
    cc = char_coeffs(op)
    op.require_constant()
    p0 = CPoint.coerce(p0)
    z, zeta = _split(p)
    # the Schwarz pair must be evaluable here (the closed form does not use it)
    (curve.schwarz_inverse if j == 1 else curve.schwarz)(zeta if j == 1 else z)
    out = _exp_factor(cc.A0, cc.B0, p0, z, zeta)
    return complex(out) if np.ndim(out) == 0 else out


def _beta_jet(op, curve, p0, p, j, k):
    cc = char_coeffs(op)
    roles = _roles(j, curve, cc.A0, cc.B0, p0)
    z, zeta = _split(p)
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    pp, ss = (z, zeta) if j == 1 else (zeta, z)
    cs, J, _ = _coefficient_jets(ss, roles, cc.kappa, k, k + 2)
    w = pp - J[..., 0]
    bk = sum(cs[k][m][..., 0] * w**m for m in range(k + 1))
    return _exp_factor(cc.A0, cc.B0, p0, z, zeta) * bk


def _adjoint_ring(f, P, S, cp, cs, C, r, n):
    """``L* f = f_ps - cp f_p - cs f_s + C f`` at ``(P, S)`` from a 2-D Cauchy ring."""
    th = 2 * np.pi * np.arange(n) / n
    e = np.exp(1j * th)
    Pg = P[..., None, None] + r * e[:, None]
    Sg = S[..., None, None] + r * e[None, :]
    vals = f(Pg, Sg)
    ea = np.conj(e)[:, None]
    eb = np.conj(e)[None, :]
    nn = n * n
    f0 = vals.sum(axis=(-2, -1)) / nn
    fp = (vals * ea).sum(axis=(-2, -1)) / (nn * r)
    fs = (vals * eb).sum(axis=(-2, -1)) / (nn * r)
    fps = (vals * ea * eb).sum(axis=(-2, -1)) / (nn * r * r)
    return fps - cp * fp - cs * fs + C * f0


def _beta_quad_generic(k, P, S, roles, kappa, C, r_d, n_cauchy, n_gauss):
    """``beta_k`` in generic roles from the transport integral (recursive)."""
    cp, cs = roles.cp, roles.cs

    def E(Pv, Sv):
        return np.exp(cp * (Sv - roles.s0) + cs * (Pv - roles.p0))

    if k == 0:
        return E(P, S)
    sig = roles.sigma(S)
    dsig = roles.sigma_deriv(S)
    bnd = E(sig, S) * (kappa * (S - roles.s0)) ** k / factorial(k)

    if k == 1:
        def lstar_prev(T, Sv):
            return -kappa * E(T, Sv)
    else:
        def prev(Pv, Sv):
            return _beta_quad_generic(k - 1, Pv, Sv, roles, kappa, C, r_d, n_cauchy, n_gauss)

        def lstar_prev(T, Sv):
            return _adjoint_ring(prev, T, np.broadcast_to(Sv, T.shape), cp, cs, C, r_d, n_cauchy)

    t, wts = quad.gauss_legendre(n_gauss)
    d = P - sig
    T = sig[..., None] + d[..., None] * t
    Sb = np.broadcast_to(S[..., None], T.shape)
    integrand = np.exp(cs * (P[..., None] - T)) * lstar_prev(T, Sb) / dsig[..., None]
    integral = d * np.sum(integrand * wts, axis=-1)
    return np.exp(cs * (P - sig)) * bnd - integral


def beta_k(op: EllipticOperator, curve: AnalyticCurve, p0, p, j: int = 1, k: int = 1,
           method: str = "jet", r_d: float = 1e-2, n_cauchy: int = 16, n_gauss: int = 16):
    """Coefficient ``beta_k^j`` at ``p``.

    ``method="jet"`` runs the exact coefficient recursion.  ``method="quad"``
    integrates the transport equation along the straight complex segment from
    the curve point ``sigma(s)`` to ``p``, with ``L* beta_{k-1}`` obtained by
    Cauchy-ring differentiation (radius ``r_d``, ``n_cauchy`` nodes per ring);
    its cost grows geometrically, so it is limited to ``k <= 2``.
    """
    op.require_constant()
    if k > K_MAX:
        raise ValidityError(f"beta recursion limited to k <= {K_MAX}")
    p0 = CPoint.coerce(p0)
    if method == "jet":
        out = _beta_jet(op, curve, p0, p, j, k)
    elif method == "quad":
        if k > BETA_QUAD_MAX:
            raise ValidityError(f"quadrature route limited to k <= {BETA_QUAD_MAX}")
        cc = char_coeffs(op)
        roles = _roles(j, curve, cc.A0, cc.B0, p0)
        z, zeta = _split(p)
        z = np.asarray(z, dtype=complex)
        zeta = np.asarray(zeta, dtype=complex)
        P, S = (z, zeta) if j == 1 else (zeta, z)
        out = _beta_quad_generic(k, P, S, roles, cc.kappa, cc.C0, r_d, n_cauchy, n_gauss)
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class BetaCoeffs:
    """Evaluator for ``beta_k^j``, ``k = 0..K``, at a fixed source point."""

    op: EllipticOperator
    curve: AnalyticCurve
    source: CPoint
    j: int
    K: int

    def __call__(self, k: int, z, zeta, method: str = "jet"):
        if k > self.K:
            raise ValidityError(f"k={k} exceeds order {self.K}")
        return beta_k(self.op, self.curve, self.source, (z, zeta), self.j, k, method)


# ---------------------------------------------------------------------------
# V evaluation


@dataclass(frozen=True)
class VValues:
    V1: np.ndarray
    V2: np.ndarray
    V: np.ndarray
    dVdz: np.ndarray
    dVdzeta: np.ndarray
    tail: np.ndarray


@dataclass(frozen=True, eq=False)
class VEvaluator:
    """``V_1, V_2, V`` and first partials for a fixed source point.

    ``mode="series"`` sums the beta-series to order ``K``; ``mode="picard"``
    solves the Volterra equations (slow, one point at a time).
    """

    op: EllipticOperator
    curve: AnalyticCurve
    source: CPoint
    mode: str = "series"
    K: int = 6
    iters: int = 6

    def __post_init__(self):
        self.op.require_constant()
        object.__setattr__(self, "source", CPoint.coerce(self.source))
        if self.mode not in ("series", "picard"):
            raise ValueError("mode must be 'series' or 'picard'")
        if not 0 <= self.K <= K_MAX:
            raise ValidityError(f"series order must be in [0, {K_MAX}]")

    def evaluate(self, z, zeta) -> VValues:
        if self.mode == "picard":
            return self._evaluate_picard(z, zeta)
        cc = char_coeffs(self.op)
        A, B, kap = cc.A0, cc.B0, cc.kappa
        z = np.asarray(z, dtype=complex)
        zeta = np.asarray(zeta, dtype=complex)
        r1 = _roles(1, self.curve, A, B, self.source)
        r2 = _roles(2, self.curve, A, B, self.source)
        W1, W1z, W1zeta, t1 = _w_series(z, zeta, r1, kap, self.K)
        W2, W2zeta, W2z, t2 = _w_series(zeta, z, r2, kap, self.K)
        E = _exp_factor(A, B, self.source, z, zeta)
        V1, V2 = E * W1, E * W2
        dz = E * (W1z - W2z + B * (W1 - W2))
        dzeta = E * (W1zeta - W2zeta + A * (W1 - W2))
        tail = np.abs(E) * (t1[-1] + t2[-1])
        if self.K >= 3:
            grow = (t1[-1] > t1[-2]) & (t1[-2] > t1[-3]) & (t1[-1] > 1e-14)
            if np.any(grow):
                warnings.warn("V-series terms grow with k; evaluation point may be too far from the curve",
                              SeriesDivergenceWarning, stacklevel=2)
        return VValues(V1, V2, V1 - V2, dz, dzeta, tail)

    def _evaluate_picard(self, z, zeta) -> VValues:
        z = np.asarray(z, dtype=complex)
        zeta = np.asarray(zeta, dtype=complex)
        out = np.empty((5,) + z.shape, dtype=complex)
        for idx in np.ndindex(z.shape):
            r = picard_solve(self.op, self.curve, self.source, (z[idx], zeta[idx]), self.iters)
            out[(slice(None),) + idx] = (r.V1, r.V2, r.V1 - r.V2, r.dVdz, r.dVdzeta)
        return VValues(out[0], out[1], out[2], out[3], out[4], np.zeros(z.shape))

    def __call__(self, z, zeta) -> VValues:
        return self.evaluate(z, zeta)

    def real(self, x, y):
        """``(V, V_x, V_y)`` at real points, using ``d/dx = d/dz + d/dzeta``
        and ``d/dy = i (d/dz - d/dzeta)``."""
        z = np.asarray(x) + 1j * np.asarray(y)
        vals = self.evaluate(z, np.conj(z))
        Vx = vals.dVdz + vals.dVdzeta
        Vy = 1j * (vals.dVdz - vals.dVdzeta)
        return vals.V, Vx, Vy, vals


def v_eval(ve: VEvaluator, p) -> tuple:
    """``(V1, V2, V, dV/dz, dV/dzeta)`` at ``p`` (a CPoint or a ``(z, zeta)`` pair)."""
    z, zeta = _split(p)
    r = ve.evaluate(z, zeta)
    vals = (r.V1, r.V2, r.V, r.dVdz, r.dVdzeta)
    return tuple(complex(v) if np.ndim(v) == 0 else v for v in vals)


# ---------------------------------------------------------------------------
# Picard / Volterra oracle


@dataclass(frozen=True)
class PicardResult:
    V1: complex
    V2: complex
    dVdz: complex
    dVdzeta: complex
    history1: tuple
    history2: tuple


def _picard_generic(xs, ys, x0, y0, sig, dsig, sig_inv, a, b, C, kappa, iters, n, N, tol):
    """Solve for one ``V_j`` in generic variables ``(x, y)``.

    ``L* = d_x d_y - a d_x - b d_y + C``; the curve is ``y = sig(x)`` and the
    characteristic ``x = xQ`` with ``xQ = sig_inv(y0)``.  The representation

        V = Phi2 + int_{sig(x)}^{y} dtau int_{xQ}^{x} mu(t, tau) dt,
        Phi2 = R(x, sig(x)) exp(a (y - sig(x))),

    turns the problem into a Volterra equation for ``mu`` with forcing
    ``kappa * Phi2``.  ``mu`` is discretized as a degree-``N`` polynomial in
    ``y - ys`` at ``n`` Lobatto nodes on the segment ``xQ -> xs``.
    Returns ``(V, V_x, V_y, history)``.
    """
    xQ = sig_inv(y0)
    sn = quad.cheb_lobatto(n)
    X = xQ + sn * (xs - xQ)
    M = quad.cumint_matrix(n) * (xs - xQ)
    sg = sig(X)
    dsg = dsig(X)

    def riemann(x, y):
        e = np.exp(a * (y - y0) + b * (x - x0))
        t = kappa * (x - x0) * (y - y0)
        return e, e * bessel_phi(t), e * bessel_phi_prime(t)

    _, R_on, _ = riemann(X, sg)
    g = R_on * np.exp(a * (ys - sg))                     # Phi2(x, ys)
    m = np.arange(N + 1)
    a_pow = np.array([a**k / factorial(k) for k in m])
    Psi = kappa * g[:, None] * a_pow[None, :]            # poly coefficients in (y - ys)
    d = sg - ys
    dpow = d[:, None] ** np.arange(N + 2)[None, :]
    inv = 1.0 / np.arange(1, N + 2)

    def tau_int(q):
        # int_{sig(x)}^{y} q(x, tau) dtau as a polynomial in (y - ys)
        out = np.zeros_like(q)
        out[:, 1:] = q[:, :-1] * inv[:-1]
        out[:, 0] -= np.sum(q * dpow[:, 1:] * inv, axis=1)
        return out

    mu = Psi.copy()
    history = []
    scale = max(1.0, float(np.max(np.abs(Psi))))
    for _ in range(iters):
        Q = M @ mu
        new = Psi + a * tau_int(mu) + b * Q - C * tau_int(Q)
        new[:, 0] -= a * dsg * np.sum(Q * dpow[:, : N + 1], axis=1)
        diff = float(np.max(np.abs(new - mu)))
        history.append(diff)
        mu = new
        if diff <= 1e-15 * scale:
            break
    if history and history[-1] > tol * scale:
        raise ConvergenceError(f"Picard iteration not converged ({history[-1]:.2e})", history)
    Q = M @ mu
    V = g[-1] + tau_int(Q)[-1, 0]
    # derivatives at the evaluation point (last node)
    _, R, Rp = riemann(xs, sig(xs))
    s_s = sig(xs)
    Rx = b * R + kappa * (s_s - y0) * Rp
    Ry = a * R + kappa * (xs - x0) * Rp
    ds = dsg[-1]
    ex = np.exp(a * (ys - s_s))
    Phi2 = R * ex
    dPhi2_x = ex * (Rx + ds * Ry) - a * ds * Phi2
    Vy = a * Phi2 + Q[-1, 0]
    Vx = dPhi2_x - ds * np.sum(Q[-1] * dpow[-1, : N + 1]) + tau_int(mu)[-1, 0]
    return complex(V), complex(Vx), complex(Vy), tuple(history)


def picard_solve(op: EllipticOperator, curve: AnalyticCurve, p0, p, iters: int = 6,
                 n: int = 24, N: int = 30, tol: float = 1e-8) -> PicardResult:
    cc = char_coeffs(op)
    op.require_constant()
    p0 = CPoint.coerce(p0)
    z, zeta = _split(p)
    z, zeta = complex(z), complex(zeta)
    A, B, C, kap = cc.A0, cc.B0, cc.C0, cc.kappa
    # V_2: (x, y) = (z, zeta), curve zeta = S(z)
    V2, V2x, V2y, h2 = _picard_generic(z, zeta, p0.z, p0.zeta, curve.schwarz, curve.schwarz_deriv,
                                       curve.schwarz_inverse, A, B, C, kap, iters, n, N, tol)
    # V_1: (x, y) = (zeta, z), curve z = S~(zeta)
    V1, V1x, V1y, h1 = _picard_generic(zeta, z, p0.zeta, p0.z, curve.schwarz_inverse,
                                       curve.schwarz_inverse_deriv, curve.schwarz, B, A, C, kap,
                                       iters, n, N, tol)
    return PicardResult(V1, V2, V1y - V2x, V1x - V2y, h1, h2)


def v_picard(op: EllipticOperator, curve: AnalyticCurve, p0, p, iters: int = 6, tol: float = 1e-8) -> tuple:
    """``(V1, V2)`` from the Volterra/Picard oracle.

    Raises :class:`ConvergenceError` if the last successive difference exceeds
    ``tol`` (relative to the forcing); pass ``tol=np.inf`` to accept any result.
    """
    r = picard_solve(op, curve, p0, p, iters, tol=tol)
    return r.V1, r.V2


# ---------------------------------------------------------------------------
# c0 and monodromy


def c0(op: EllipticOperator, curve: AnalyticCurve, p0) -> float:
    """``c0 = exp(A (S(z0) - zeta0) + B (S~(zeta0) - z0))`` (real for real operators).

    The two exponentials averaged in the general definition coincide for
    constant coefficients.
    """
    cc = char_coeffs(op)
    op.require_constant()
    p0 = CPoint.coerce(p0)
    if cc.A0 == 0 and cc.B0 == 0:
        return 1.0
    e1 = cc.A0 * (complex(curve.schwarz(p0.z)) - p0.zeta) + cc.B0 * (complex(curve.schwarz_inverse(p0.zeta)) - p0.z)
    e2 = cc.B0 * (complex(curve.schwarz_inverse(p0.zeta)) - p0.z) + cc.A0 * (complex(curve.schwarz(p0.z)) - p0.zeta)
    return float((0.5 * (np.exp(e1) + np.exp(e2))).real)


@dataclass(frozen=True)
class MonodromyResult:
    increment: complex
    predicted: complex
    rho: float
    phi: float

    def to_dict(self) -> dict:
        return {
            "increment_re": self.increment.real,
            "increment_im": self.increment.imag,
            "predicted_re": self.predicted.real,
            "predicted_im": self.predicted.imag,
            "rho": self.rho,
        }


def increment_leading_order(op: EllipticOperator, curve: AnalyticCurve, p0, rho: float,
                            phi: float = np.pi / 2) -> complex:
    """First-order prediction of the monodromy increment of the log part.

    With ``S1 = S'(zQ)`` and ``S1~ = S~'(zetaQ)``:
    (i/2) c0 kappa rho { e^{-i phi} [(zQ - z0) + S1~ (zetaQ - zeta0)]
                        - e^{i phi} [(zetaQ - zeta0) + S1 (zQ - z0)] }.
    """
    cc = char_coeffs(op)
    p0 = CPoint.coerce(p0)
    zQ = complex(curve.schwarz_inverse(p0.zeta))
    zetaQ = complex(curve.schwarz(p0.z))
    S1 = complex(curve.schwarz_deriv(zQ))
    S1t = complex(curve.schwarz_inverse_deriv(zetaQ))
    br = np.exp(-1j * phi) * ((zQ - p0.z) + S1t * (zetaQ - p0.zeta)) - np.exp(1j * phi) * (
        (zetaQ - p0.zeta) + S1 * (zQ - p0.z))
    return complex(0.5j * c0(op, curve, p0) * cc.kappa * rho * br)


def _tracked_log(w: np.ndarray) -> np.ndarray:
    raw = np.angle(w)
    arg = np.unwrap(raw)
    if np.any(np.abs(np.diff(arg)) > np.pi / 2):
        raise BranchTrackingError("argument changes too fast between samples; increase n_quad")
    return np.log(np.abs(w)) + 1j * arg


def monodromy_increment(op: EllipticOperator, curve: AnalyticCurve, p0, rho: float, n_quad: int = 64,
                        K: int = 8, phi: float = np.pi / 2) -> MonodromyResult:
    """Continue ``-(V_1 log psi1~ + V_2 log psi2~) / (4 pi)`` once around the
    circle of radius ``rho`` about ``Q`` (counterclockwise, starting at angle
    ``phi``) and return the change together with the leading-order prediction.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    p0 = CPoint.coerce(p0)
    zQ = complex(curve.schwarz_inverse(p0.zeta))
    zetaQ = complex(curve.schwarz(p0.z))
    theta = phi + 2 * np.pi * np.arange(n_quad + 1) / n_quad
    z = zQ + rho * np.exp(1j * theta)
    zeta = zetaQ + rho * np.exp(-1j * theta)
    ve = VEvaluator(op, curve, p0, "series", K)
    vals = ve.evaluate(z, zeta)
    log1 = _tracked_log(curve.schwarz_inverse(zeta) - p0.z)
    log2 = _tracked_log(curve.schwarz(z) - p0.zeta)
    G = -(vals.V1 * log1 + vals.V2 * log2) / (4 * np.pi)
    inc = complex(G[-1] - G[0])
    pred = increment_leading_order(op, curve, p0, rho, phi)
    return MonodromyResult(inc, pred, float(rho), float(phi))
