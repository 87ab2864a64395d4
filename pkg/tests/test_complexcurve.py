import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellreflect.complexcurve import (Circle, CPoint, Line, ReflectionContext, SchwarzCurve, anchor_on_curve,
                                     curve_from_spec, reflect_point, schwarz, schwarz_deriv, schwarz_inverse)
from ellreflect.errors import ConfigError, SingularityError

UNIT = Circle(0j, 1.0)
XAXIS = Line(0.0, 1.0, 0.0)
YAXIS = Line(1.0, 0.0, 0.0)
CURVES = [UNIT, XAXIS, YAXIS, Line(1.0, 1.0, -1.0), Circle(0.5 - 0.2j, 2.0)]


def test_schwarz_examples():
    assert schwarz(XAXIS, 2 + 3j) == pytest.approx(2 + 3j)
    assert schwarz(UNIT, 0.5) == pytest.approx(2.0)
    # x = 0: m = -1, q = 0, so S(z) = -z; its conjugate is the mirror image -1 + i
    assert schwarz(YAXIS, 1 + 1j) == pytest.approx(-1 - 1j)
    assert reflect_point(YAXIS, (1.0, 1.0)) == pytest.approx((-1.0, 1.0))


def test_schwarz_inverse_examples():
    assert schwarz_inverse(XAXIS, 1 - 2j) == pytest.approx(1 - 2j)
    assert schwarz_inverse(UNIT, 0.5) == pytest.approx(2.0)


def test_schwarz_deriv_examples():
    assert schwarz_deriv(XAXIS, 0.3 + 7j) == pytest.approx(1.0)
    assert schwarz_deriv(UNIT, 0.5) == pytest.approx(-4.0)


def test_reflect_point_examples():
    assert reflect_point(UNIT, (0.5, 0.0)) == pytest.approx((2.0, 0.0))
    assert reflect_point(XAXIS, (1.0, 0.3)) == pytest.approx((1.0, -0.3))
    assert reflect_point(UNIT, (0.3, 0.4)) == pytest.approx((1.2, 1.6))


def test_anchor_examples():
    assert anchor_on_curve(UNIT, (2.0, 0.0)) == pytest.approx((1.0, 0.0))
    assert anchor_on_curve(XAXIS, (1.0, -0.3)) == pytest.approx((1.0, 0.0))
    assert anchor_on_curve(UNIT, (1.2, 1.6)) == pytest.approx((0.6, 0.8))


def test_circle_center_is_singular():
    with pytest.raises(SingularityError):
        schwarz(UNIT, 0.0)
    with pytest.raises(SingularityError):
        reflect_point(UNIT, (0.0, 0.0))
    with pytest.raises(SingularityError):
        anchor_on_curve(UNIT, (0.0, 0.0))


def _near_points(curve, n=100, seed=1):
    rng = np.random.default_rng(seed)
    base = curve.sample(n)
    off = rng.uniform(-0.2, 0.2, n) + 1j * rng.uniform(-0.2, 0.2, n)
    return base + off * min(1.0, curve.scale / 4 if np.isfinite(curve.scale) else 1.0)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: repr(c)[:30])
def test_inverse_identity_and_involution(curve):
    z = _near_points(curve)
    assert np.max(np.abs(curve.schwarz_inverse(curve.schwarz(z)) - z)) < 1e-12
    zeta = np.conj(z)
    assert np.max(np.abs(curve.schwarz(curve.schwarz_inverse(zeta)) - zeta)) < 1e-12
    for p in z[:20]:
        q = reflect_point(curve, (p.real, p.imag))
        back = reflect_point(curve, q)
        assert back == pytest.approx((p.real, p.imag), abs=1e-12)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: repr(c)[:30])
def test_fixed_points_and_unimodular_derivative(curve):
    pts = curve.sample(50)
    for p in pts:
        assert reflect_point(curve, (p.real, p.imag)) == pytest.approx((p.real, p.imag), abs=1e-12)
    assert np.max(np.abs(np.abs(curve.schwarz_deriv(pts)) - 1)) < 1e-12
    assert np.all(curve.contains(pts.real, pts.imag))


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0.3, 0.95), th=st.floats(-np.pi, np.pi))
def test_side_swap_circle(r, th):
    p = r * np.exp(1j * th)
    q = reflect_point(UNIT, (p.real, p.imag))
    assert np.sign(UNIT.defining(p.real, p.imag)) == -np.sign(UNIT.defining(*q))


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-5, 5), y=st.floats(-5, 5).filter(lambda v: abs(v - (1 - 0)) > 1e-3))
def test_side_swap_line(x, y):
    line = Line(1.0, 1.0, -1.0)
    if abs(line.defining(x, y)) < 1e-6:
        return
    q = reflect_point(line, (x, y))
    assert np.sign(line.defining(x, y)) == -np.sign(line.defining(*q))
    assert reflect_point(line, q) == pytest.approx((x, y), abs=1e-12)


def test_line_m_q_formulas():
    line = Line(1.0, 2.0, 3.0)
    n2 = 5.0
    assert line.m == pytest.approx((4 - 1 + 4j) / n2)
    assert line.q == pytest.approx((-6 + 12j) / n2)


def test_general_circle_schwarz_function():
    c = Circle(0.5 - 0.2j, 2.0)
    z = 1.3 + 0.4j
    assert c.schwarz(z) == pytest.approx(np.conj(c.center) + 4.0 / (z - c.center))


def test_reflection_context():
    ctx = ReflectionContext.build(UNIT, (0.9, 0.1))
    z0 = 0.9 + 0.1j
    assert ctx.reflected.z == pytest.approx(np.conj(1 / z0))
    assert UNIT.contains(*ctx.anchor)
    assert ctx.source.zeta == pytest.approx(np.conj(z0))


def test_user_curve_matches_builtin_circle():
    user = SchwarzCurve(lambda z: 1 / z, lambda w: 1 / w, validity_radius=0.5, base_point=1.0 + 0j)
    z = 0.8 + 0.3j
    assert user.schwarz(z) == pytest.approx(UNIT.schwarz(z))
    assert user.schwarz_deriv(z) == pytest.approx(UNIT.schwarz_deriv(z), rel=1e-10)
    jet = user.schwarz_jet(z, 3)
    assert jet == pytest.approx(UNIT.schwarz_jet(z, 3), rel=1e-8)
    assert reflect_point(user, (0.5, 0.0)) == pytest.approx((2.0, 0.0))
    e = anchor_on_curve(user, (1.2, 0.0))
    assert abs(complex(*e)) == pytest.approx(1.0, abs=1e-10)


def test_cpoint_helpers():
    p = CPoint.from_real(1.0, 2.0)
    assert p.is_real()
    assert p.real_xy() == pytest.approx((1.0, 2.0))
    assert not CPoint(1j, 1j).is_real()


def test_curve_from_spec_roundtrip_and_errors():
    for c in (UNIT, XAXIS, Circle(1 + 1j, 0.5)):
        again = curve_from_spec(c.to_spec())
        assert again.schwarz(0.3 + 0.2j) == pytest.approx(c.schwarz(0.3 + 0.2j))
    with pytest.raises(ConfigError):
        curve_from_spec({"kind": "ellipse"})
    with pytest.raises(ConfigError):
        curve_from_spec({"kind": "line"})
