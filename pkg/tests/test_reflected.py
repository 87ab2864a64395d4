import numpy as np
import pytest

from ellreflect.complexcurve import Circle, CPoint, Line
from ellreflect.errors import BranchTrackingError, ValidityError
from ellreflect.operator import EllipticOperator, adjoint_residual, alpha_coeffs, char_coeffs, riemann_const
from ellreflect.reflected import (BetaCoeffs, VEvaluator, beta0, beta_k, c0, increment_leading_order,
                                  monodromy_increment, picard_solve, v_eval, v_picard)

UNIT = Circle(0j, 1.0)
XAXIS = Line(0.0, 1.0, 0.0)
HELM = EllipticOperator.helmholtz(1.0)
DRIFT = EllipticOperator.constant(0.4, -0.3, 1.5)
GAUGE = EllipticOperator.constant(1.0, 0.5, 0.3125)
P09 = CPoint.from_real(0.9, 0.0)


def _gamma_c(curve, n=50, seed=0, spread=0.1):
    """Points (z, zeta) of the complexified unit circle zeta = 1/z near the source P09."""
    rng = np.random.default_rng(seed)
    z = np.exp(1j * rng.uniform(-0.6, 0.6, n)) + spread * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
    return z, curve.schwarz(z)


def _near_real(n=20, seed=5, dmax=0.2):
    """Real points within ``dmax`` of the unit circle, on the arc facing P09."""
    rng = np.random.default_rng(seed)
    d = rng.uniform(0.02, dmax, n) * rng.choice([-1, 1], n)
    th = rng.uniform(-0.6, 0.6, n)
    z = (1 + d) * np.exp(1j * th)
    return z, np.conj(z)


def test_beta0_examples():
    assert beta0(EllipticOperator.laplace(), UNIT, P09, (0.7 + 0.2j, 0.8 - 0.1j)) == 1
    z, w = _gamma_c(UNIT, 10)
    for j in (1, 2):
        a = alpha_coeffs(DRIFT, P09, 0)[j - 1]
        assert np.allclose(beta0(DRIFT, UNIT, P09, (z, w), j), a(0, z, w), atol=1e-12)
    a1 = alpha_coeffs(DRIFT, P09, 0)[0]
    z, w = 0.3 + 0.4j, 0.7 - 0.2j
    assert beta0(DRIFT, XAXIS, P09, (z, w), 1) == pytest.approx(a1(0, z, w))


@pytest.mark.parametrize("op", [HELM, DRIFT])
@pytest.mark.parametrize("j", [1, 2])
def test_beta_matches_alpha_on_gamma_c(op, j):
    z, w = _gamma_c(UNIT, 12)
    alphas = alpha_coeffs(op, P09, 6)[j - 1]
    for k in range(0, 7):
        assert np.allclose(beta_k(op, UNIT, P09, (z, w), j, k), alphas(k, z, w), atol=1e-12)


@pytest.mark.parametrize("j, k", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_beta_jet_agrees_with_transport_quadrature(j, k):
    p = (0.95 + 0.1j, 0.98 - 0.05j)
    jet = beta_k(DRIFT, UNIT, P09, p, j, k, method="jet")
    qd = beta_k(DRIFT, UNIT, P09, p, j, k, method="quad")
    assert abs(jet - qd) < 1e-8


def test_beta1_closed_form_display():
    cc = char_coeffs(DRIFT)
    z, w = 0.93 + 0.05j, 1.02 - 0.08j
    St = UNIT.schwarz_inverse(w)
    dSt = UNIT.schwarz_inverse_deriv(w)
    E = np.exp(cc.A0 * (w - P09.zeta) + cc.B0 * (z - P09.z))
    expected = cc.kappa * E * ((z - St) / dSt + w - P09.zeta)
    assert beta_k(DRIFT, UNIT, P09, (z, w), 1, 1) == pytest.approx(expected, abs=1e-13)


def test_beta_quad_limits():
    with pytest.raises(ValidityError):
        beta_k(HELM, UNIT, P09, (0.9, 0.9), 1, 3, method="quad")
    with pytest.raises(ValidityError):
        beta_k(HELM, UNIT, P09, (0.9, 0.9), 1, 13)


def test_gauge_case_series_reproduces_riemann():
    ve = VEvaluator(GAUGE, UNIT, P09, K=8)
    z, w = _near_real(10)
    vals = ve.evaluate(z, w)
    ref = riemann_const(GAUGE, P09, (z, w))
    assert np.max(np.abs(vals.V1 - ref)) < 1e-8
    assert np.max(np.abs(vals.V2 - ref)) < 1e-8
    assert np.max(np.abs(vals.V)) < 1e-8


def test_beta_coeffs_object():
    bc = BetaCoeffs(DRIFT, UNIT, P09, 1, 3)
    p = (0.95 + 0.1j, 0.98 - 0.05j)
    assert bc(2, *p) == pytest.approx(beta_k(DRIFT, UNIT, P09, p, 1, 2))
    with pytest.raises(ValidityError):
        bc(4, *p)


@pytest.mark.parametrize("op", [HELM, DRIFT])
def test_v_boundary_match(op):
    ve = VEvaluator(op, UNIT, P09, K=6)
    z, w = _gamma_c(UNIT, 50, spread=0.05)
    vals = ve.evaluate(z, w)
    ref = riemann_const(op, P09, (z, w))
    assert np.max(np.abs(vals.V1 - ref)) <= 1e-7
    assert np.max(np.abs(vals.V2 - ref)) <= 1e-7
    assert np.max(np.abs(vals.V)) <= 1e-8


def test_v_vanishes_for_lines():
    for line in (XAXIS, Line(1.0, 1.0, -1.0)):
        ve = VEvaluator(DRIFT, line, CPoint.from_real(0.3, 0.4), K=6)
        rng = np.random.default_rng(2)
        z = rng.uniform(-1, 1, 10) + 1j * rng.uniform(-1, 1, 10)
        w = np.conj(z) + 0.1 * (rng.uniform(-1, 1, 10) + 1j * rng.uniform(-1, 1, 10))
        vals = ve.evaluate(z, w)
        assert np.max(np.abs(vals.V)) < 1e-8
        assert np.max(np.abs(vals.dVdz)) < 1e-8


@pytest.mark.parametrize("op", [HELM, DRIFT])
@pytest.mark.parametrize("j", [1, 2])
def test_v_adjoint_residual_order(op, j):
    # the series converges geometrically, so probe close to the curve where the
    # K = 12 truncation residual sits well below the O(h^2) stencil error
    ve = VEvaluator(op, UNIT, P09, K=12)
    f = (lambda z, w: ve.evaluate(z, w).V1) if j == 1 else (lambda z, w: ve.evaluate(z, w).V2)
    cc = char_coeffs(op)
    z = 1.02 * np.exp(0.1j)
    w = np.conj(z)
    r1 = abs(adjoint_residual(cc, f, z, w, 1e-2))
    r2 = abs(adjoint_residual(cc, f, z, w, 5e-3))
    assert r2 < 1e-4
    assert np.log2(r1 / r2) >= 1.8


@pytest.mark.parametrize("op", [HELM, DRIFT])
def test_v_conjugacy_on_real_slice(op):
    ve = VEvaluator(op, UNIT, P09, K=6)
    z, w = _near_real(20)
    vals = ve.evaluate(z, w)
    assert np.max(np.abs(vals.V2 - np.conj(vals.V1))) < 1e-8
    assert np.max(np.abs(vals.V.real)) < 1e-8


def _near_source(n=20, seed=5, dmax=0.2, psi_max=0.3):
    """Real points within ``dmax`` of the unit circle whose mirror image lies
    within ``psi_max`` of P09; this is the region a reflection path visits."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        d = rng.uniform(0.02, dmax) * rng.choice([-1, 1])
        z = (1 + d) * np.exp(1j * rng.uniform(-0.6, 0.6))
        if abs(1 / np.conj(z) - P09.z) <= psi_max:
            out.append(z)
    z = np.array(out)
    return z, np.conj(z)


def test_series_against_picard_oracle():
    ve = VEvaluator(HELM, UNIT, P09, K=6)
    z, w = _near_source(20)
    series = ve.evaluate(z, w)
    worst = 0.0
    nonzero = 0.0
    for i in range(len(z)):
        V1, V2 = v_picard(HELM, UNIT, P09, (z[i], w[i]), tol=1e-6)
        worst = max(worst, abs(V1 - series.V1[i]), abs(V2 - series.V2[i]))
        nonzero = max(nonzero, abs(V1 - V2))
    assert worst <= 1e-4
    assert nonzero > 1e-3  # V is not trivially zero at these points


def test_picard_derivatives_match_series():
    ve = VEvaluator(DRIFT, UNIT, P09, K=12)
    p = (1.03 * np.exp(0.2j), 1.03 * np.exp(-0.2j))
    r = picard_solve(DRIFT, UNIT, P09, p, tol=1e-6)
    s = ve.evaluate(*p)
    assert r.dVdz == pytest.approx(complex(s.dVdz), abs=1e-6)
    assert r.dVdzeta == pytest.approx(complex(s.dVdzeta), abs=1e-6)


def test_picard_examples():
    r = picard_solve(EllipticOperator.laplace(), UNIT, P09, (1.1 + 0.1j, 1.1 - 0.1j))
    assert r.V1 == pytest.approx(1.0) and r.V2 == pytest.approx(1.0)
    assert len(r.history1) <= 2
    V1, V2 = v_picard(DRIFT, XAXIS, CPoint.from_real(0.3, 0.4), (0.4 + 0.1j, 0.45 - 0.2j), tol=1e-6)
    assert abs(V1 - V2) < 1e-6
    r = picard_solve(HELM, UNIT, P09, (1.15 * np.exp(0.5j), 1.15 * np.exp(-0.5j)), iters=6, tol=np.inf)
    h = np.array(r.history1)
    h = h[h > 1e-14]
    assert len(h) >= 3
    assert np.all(h[:-1] / h[1:] >= 3.0)


def test_v_eval_accepts_points():
    ve = VEvaluator(HELM, UNIT, P09, K=4)
    out = v_eval(ve, CPoint.from_real(1.05, 0.1))
    assert len(out) == 5
    assert out[2] == pytest.approx(out[0] - out[1])


def test_c0_examples():
    assert c0(HELM, UNIT, P09) == 1.0
    for b, y0 in [(1.0, 0.5), (-0.7, 0.2), (2.0, -0.3)]:
        op = EllipticOperator.constant(0.3, b, 1.0)
        assert c0(op, XAXIS, (0.4, y0)) == pytest.approx(np.exp(-b * y0), abs=1e-12)
    op = EllipticOperator.constant(1.0, 0.0, 0.7)
    assert c0(op, UNIT, (0.5, 0.0)) == pytest.approx(np.exp(0.75), abs=1e-12)
    assert c0(op, UNIT, (0.5, 0.0)) == pytest.approx(2.1170000166126748, abs=1e-12)


def test_monodromy_vanishing_cases():
    lap = monodromy_increment(EllipticOperator.laplace(), UNIT, P09, 1e-2)
    assert abs(lap.increment) < 1e-10
    line = monodromy_increment(DRIFT, XAXIS, CPoint.from_real(0.2, 0.3), 1e-2)
    assert abs(line.increment) < 1e-8


def test_monodromy_helmholtz_first_order():
    p = CPoint.from_real(0.8, 0.0)
    slopes, devs = [], []
    for rho in (1e-2, 5e-3, 2.5e-3):
        res = monodromy_increment(HELM, UNIT, p, rho)
        pred = increment_leading_order(HELM, UNIT, p, rho)
        assert res.predicted == pytest.approx(pred)
        assert abs(res.increment) > 0
        slopes.append(res.increment / rho)
        devs.append(abs(res.increment / res.predicted - 1))
    # increment / rho converges to the leading-order slope
    assert devs[0] < 0.1
    assert devs[1] < devs[0] / 1.8 and devs[2] < devs[1] / 1.8
    assert abs(slopes[2] - slopes[1]) < abs(slopes[1] - slopes[0])


def test_monodromy_branch_tracking_guard():
    with pytest.raises(BranchTrackingError):
        monodromy_increment(HELM, UNIT, P09, 1e-2, n_quad=3)
    with pytest.raises(ValueError):
        monodromy_increment(HELM, UNIT, P09, 0.0)
