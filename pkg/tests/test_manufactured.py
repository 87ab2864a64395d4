import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from ellreflect import bessel
from ellreflect.complexcurve import Circle, Line, reflect_point
from ellreflect.errors import ConfigError, DomainError
from ellreflect.manufactured import (circle_mode, harmonic_line_mode, line_mode, make_field, parse_label,
                                     pde_residual)
from ellreflect.operator import EllipticOperator

UNIT = Circle(0j, 1.0)
XAXIS = Line(0.0, 1.0, 0.0)
HELM = EllipticOperator.helmholtz(1.0)


def test_line_mode_helmholtz_example():
    u = line_mode(HELM, XAXIS, nu=0.6)
    for x, y in [(0.3, 0.2), (-1.0, 0.7), (2.0, -0.4)]:
        assert u(x, y) == pytest.approx(np.sin(0.8 * y) * np.cos(0.6 * x), abs=1e-15)


def test_line_mode_gauge_example():
    op = EllipticOperator.constant(0.0, 1.0, 1.25)
    u = line_mode(op, XAXIS, nu=0.0)
    for x, y in [(0.3, 0.2), (-1.0, 0.7)]:
        assert u(x, y) == pytest.approx(np.exp(-y / 2) * np.sin(y), abs=1e-15)


def test_line_mode_hyperbolic_branch():
    u = line_mode(HELM, XAXIS, nu=1.5)
    assert pde_residual(HELM, u, (0.3, 0.4)) < 1e-5
    assert abs(u(0.7, 0.0)) < 1e-15


def test_harmonic_line_mode():
    u = harmonic_line_mode(EllipticOperator.laplace(), XAXIS, n=3)
    x, y = 0.4, 0.3
    assert u(x, y) == pytest.approx(((x + 1j * y) ** 3).imag)
    with pytest.raises(DomainError):
        harmonic_line_mode(HELM, XAXIS)


def test_circle_mode_laplace_example():
    u = circle_mode(EllipticOperator.laplace(), UNIT, n=2)
    # (r^2 - r^-2) cos(2 theta): 0.25 - 4 at r = 1/2 and 4 - 1/4 at r = 2
    assert u(0.5, 0.0) == pytest.approx(-3.75)
    assert u(2.0, 0.0) == pytest.approx(3.75)
    assert u(0.5, 0.0) == pytest.approx(-u(2.0, 0.0))
    assert u(0.3, 0.4) == pytest.approx(-u(*reflect_point(UNIT, (0.3, 0.4))))


def test_circle_mode_vanishes_on_circle():
    u = circle_mode(HELM, UNIT, n=1)
    th = np.linspace(0, 2 * np.pi, 50)
    assert np.max(np.abs(u(np.cos(th), np.sin(th)))) < 1e-12
    assert u.boundary_max() < 1e-12


def test_circle_mode_gauge_example():
    op = EllipticOperator.constant(1.0, 0.0, 0.25)
    u = circle_mode(op, UNIT, n=2)
    assert u(0.5, 0.0) == pytest.approx(-np.exp(0.75) * u(2.0, 0.0), rel=1e-13)


def test_circle_mode_errors():
    with pytest.raises(DomainError):
        circle_mode(EllipticOperator.constant(0, 0, -1.0), UNIT, n=1)
    with pytest.raises(DomainError):
        circle_mode(HELM, UNIT, n=0)


FIELDS = [
    ("line helmholtz", lambda: line_mode(HELM, XAXIS, 0.6), (0.3, 0.2)),
    ("line drift", lambda: line_mode(EllipticOperator.constant(1, 1, 2), Line(1, 1, -1), 0.4), (0.2, 0.3)),
    ("circle helmholtz", lambda: circle_mode(HELM, UNIT, 1), (0.85, 0.1)),
    ("circle bessel n3", lambda: circle_mode(EllipticOperator.helmholtz(2.5), Circle(0.5 + 0.5j, 1.5), 3), (1.6, 0.9)),
    ("circle gauge", lambda: circle_mode(EllipticOperator.constant(1, 0.5, 0.3125), UNIT, 2), (0.9, -0.2)),
    ("circle drift", lambda: circle_mode(EllipticOperator.constant(0.4, -0.3, 2.0), UNIT, 1), (0.8, 0.3)),
]


@pytest.mark.parametrize("name, build, p", FIELDS, ids=[f[0] for f in FIELDS])
def test_field_invariants(name, build, p):
    u = build()
    assert u.boundary_max() <= 1e-10
    r1 = pde_residual(u.operator, u, p, 1e-2)
    r2 = pde_residual(u.operator, u, p, 5e-3)
    assert pde_residual(u.operator, u, p, 1e-3) < 1e-5 * max(1.0, abs(u(*p)))
    assert np.log2(r1 / r2) >= 1.8
    # derivative evaluators vs central differences
    h = 1e-5
    ux, uy = u.grad(*p)
    assert ux == pytest.approx((u(p[0] + h, p[1]) - u(p[0] - h, p[1])) / (2 * h), abs=1e-8)
    assert uy == pytest.approx((u(p[0], p[1] + h) - u(p[0], p[1] - h)) / (2 * h), abs=1e-8)
    # gauge identity: exp((ax+by)/2) u solves Delta w + mu^2 w = 0
    a, b, c = u.operator.constants
    w = lambda x, y: np.exp((a * x + b * y) / 2) * u(x, y)
    helm = EllipticOperator.helmholtz(np.sqrt(max(c - (a * a + b * b) / 4, 0.0)))
    assert pde_residual(helm, w, p, 1e-3) < 1e-5


def test_pde_residual_examples():
    assert pde_residual(HELM, lambda x, y: 0.0 * x, (0.3, 0.3)) == 0.0
    u = circle_mode(HELM, UNIT, 1)
    wrong = EllipticOperator.helmholtz(np.sqrt(1.1))
    p = (0.85, 0.1)
    assert pde_residual(wrong, u, p) == pytest.approx(0.1 * abs(u(*p)), rel=1e-3)


def test_labels():
    assert parse_label("circle:helmholtz:n=1") == ("circle", "helmholtz", {"n": "1"})
    u = make_field("circle:helmholtz:lam=2:n=2:sin")
    assert u.operator.constants == (0.0, 0.0, 4.0)
    assert abs(u(0.6, 0.0)) < 1e-14  # sin(2 theta) vanishes on the x-axis
    u = make_field("line:laplace")
    assert u(0.3, 0.5) == pytest.approx(((0.3 + 0.5j) ** 3).imag)
    for bad in ("ellipse", "circle:bogus", "circle:laplace:n=0", "line:helmholtz:nu=x=1"):
        with pytest.raises(ConfigError):
            make_field(bad)
    with pytest.raises(ConfigError):
        make_field("circle:n=1")  # no operator known


# ----------------------------------------------------------------- cylinder functions

def test_cylinder_examples():
    assert bessel.cylinder("J", 0, 0.0) == 1.0
    assert abs(bessel.cylinder("J", 0, 2.404825557695773)) < 1e-9
    with pytest.raises(DomainError):
        bessel.cylinder("Y", 0, 0.0)
    with pytest.raises(DomainError):
        bessel.cylinder("K", 0, 1.0)


@settings(max_examples=80, deadline=None)
@given(n=st.integers(0, 6), x=st.floats(1e-3, 50.0))
def test_cylinder_against_scipy(n, x):
    assert bessel.jn(n, x) == pytest.approx(special.jv(n, x), abs=1e-10)
    y_ref = special.yv(n, x)
    assert bessel.yn(n, x) == pytest.approx(y_ref, abs=1e-10, rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(n=st.integers(0, 6), x=st.floats(0.05, 50.0))
def test_wronskian(n, x):
    w = bessel.jn(n, x) * bessel.yn_prime(n, x) - bessel.jn_prime(n, x) * bessel.yn(n, x)
    assert w == pytest.approx(2 / (np.pi * x), rel=1e-10)
