"""Truncated Taylor series ("jets") in one complex variable.

A jet is an array of shape ``(..., N + 1)`` holding Taylor coefficients
``c_0 .. c_N`` at some base point; leading axes index independent base
points so every operation is vectorized.  Differentiation pads the top
coefficient with zero, so after ``d`` derivatives only orders ``<= N - d``
are exact.
"""
from __future__ import annotations

import numpy as np


def const(value, order: int) -> np.ndarray:
    value = np.asarray(value, dtype=complex)
    out = np.zeros(value.shape + (order + 1,), dtype=complex)
    out[..., 0] = value
    return out


def variable(base, order: int) -> np.ndarray:
    """Jet of the identity map ``s -> s`` at ``base``."""
    out = const(base, order)
    if order >= 1:
        out[..., 1] = 1.0
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for k in range(n):
        out[..., k] = np.sum(a[..., : k + 1] * b[..., k::-1], axis=-1)
    return out


def deriv(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    n = a.shape[-1]
    out[..., :-1] = a[..., 1:] * np.arange(1, n)
    return out


def recip(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros_like(a)
    out[..., 0] = 1.0 / a[..., 0]
    for k in range(1, n):
        out[..., k] = -np.sum(a[..., 1 : k + 1] * out[..., k - 1 :: -1], axis=-1) * out[..., 0]
    return out


def power(a: np.ndarray, m: int) -> np.ndarray:
    out = const(np.ones(a.shape[:-1]), a.shape[-1] - 1)
    for _ in range(m):
        out = mul(out, a)
    return out
