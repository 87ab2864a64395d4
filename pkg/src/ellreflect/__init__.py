"""Reflection of solutions of constant-coefficient elliptic equations
``u_xx + u_yy + a u_x + b u_y + c u = 0`` across real-analytic curves.

Quick start::

    from ellreflect import EllipticOperator, Circle, make_field, reflect

    op = EllipticOperator.helmholtz(1.0)
    curve = Circle(0j, 1.0)
    u = make_field("circle:n=1", op, curve)
    report = reflect(op, curve, u, (0.9, 0.1))
    report.total, u(0.9, 0.1)
"""
from .complexcurve import (AnalyticCurve, Circle, CPoint, Line, ReflectionContext, SchwarzCurve,
                           anchor_on_curve, curve_from_spec, reflect_point, schwarz, schwarz_deriv,
                           schwarz_inverse)
from .errors import (BranchTrackingError, ConfigError, ConvergenceError, DomainError, NonConstantOperatorError,
                     OnCharacteristicError, QuadratureError, ReflectionError, SingularityError, StrategyError,
                     ValidityError)
from .manufactured import SolutionField, circle_mode, line_mode, make_field, pde_residual
from .operator import (CharCoeffs, EllipticOperator, alpha_coeffs, char_coeffs, fundamental_eval, riemann_const,
                       riemann_goursat)
from .quad import Path, closed_contour, integrate_path
from .reflectcore import ReflectionReport, ReflectionStrategy, ReflectOptions, dispatch, reflect
from .reflected import VEvaluator, beta_k, c0, monodromy_increment, picard_solve, v_eval

__version__ = "0.1.0"

__all__ = [
    "AnalyticCurve", "Circle", "CPoint", "Line", "ReflectionContext", "SchwarzCurve", "anchor_on_curve",
    "curve_from_spec", "reflect_point", "schwarz", "schwarz_deriv", "schwarz_inverse",
    "BranchTrackingError", "ConfigError", "ConvergenceError", "DomainError", "NonConstantOperatorError",
    "OnCharacteristicError", "QuadratureError", "ReflectionError", "SingularityError", "StrategyError",
    "ValidityError",
    "SolutionField", "circle_mode", "line_mode", "make_field", "pde_residual",
    "CharCoeffs", "EllipticOperator", "alpha_coeffs", "char_coeffs", "fundamental_eval", "riemann_const",
    "riemann_goursat",
    "Path", "closed_contour", "integrate_path",
    "ReflectionReport", "ReflectionStrategy", "ReflectOptions", "dispatch", "reflect",
    "VEvaluator", "beta_k", "c0", "monodromy_increment", "picard_solve", "v_eval",
]
