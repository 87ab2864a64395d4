"""Integer-order Bessel functions J_n and Y_n for real positive arguments.

J_n comes from Miller's backward recurrence, normalized with the identity
``J_0 + 2 * sum_k J_{2k} = 1``.  Y_0 and Y_1 use the Neumann expansions in
even/odd J_k, and higher orders follow by the (stable) forward recurrence.
All routines are vectorized over ``x``.

>>> round(float(jn(0, 0.0)), 12)
1.0
>>> abs(float(jn(0, 2.404825557695773))) < 1e-12
True
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
_RESCALE = 1e250


def _start_order(n: int, xmax: float) -> int:
    m = int(max(n, xmax) + 30 + 4 * np.sqrt(max(n, xmax) + 1))
    return m + (m % 2)


def j_table(nmax: int, x) -> np.ndarray:
    """Return ``J_0..J_nmax`` at ``x`` as an array of shape ``(nmax + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("Bessel evaluation requires x >= 0")
    xs = np.where(x == 0, 1.0, x)
    m = _start_order(nmax, float(np.max(x, initial=0.0)))
    out = np.zeros((nmax + 1,) + x.shape)
    j_next = np.zeros_like(xs)
    j_cur = np.full_like(xs, 1e-300)
    norm = np.zeros_like(xs)
    for k in range(m, 0, -1):
        j_prev = 2.0 * k / xs * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalized J_{k-1}
        if k - 1 <= nmax:
            out[k - 1] = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        big = np.abs(j_cur) > _RESCALE
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            j_cur *= scale
            j_next *= scale
            norm *= scale
            out *= scale
    norm += j_cur
    out /= norm
    zero = x == 0
    if np.any(zero):
        out[:, zero] = 0.0
        out[0, zero] = 1.0
    return out


def _y01(x: np.ndarray, kmax: int):
    order = 2 * kmax + 1
    J = j_table(order, x)
    lg = np.log(x / 2.0) + EULER_GAMMA
    k = np.arange(1, kmax + 1).reshape((-1,) + (1,) * x.ndim)
    sign = (-1.0) ** k
    y0 = (2.0 / np.pi) * (lg * J[0] - 2.0 * np.sum(sign * J[2 : 2 * kmax + 1 : 2] / k, axis=0))
    odd_lo = J[1 : 2 * kmax : 2]
    odd_hi = J[3 : 2 * kmax + 2 : 2]
    y1 = (2.0 / np.pi) * (-J[0] / x + lg * J[1] + np.sum(sign * (odd_lo - odd_hi) / k, axis=0))
    return y0, y1


def y_table(nmax: int, x) -> np.ndarray:
    """Return ``Y_0..Y_nmax`` at ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("Y_n requires x > 0")
    kmax = int(np.max(x, initial=1.0)) + 30
    y0, y1 = _y01(x, kmax)
    out = np.empty((max(nmax, 1) + 1,) + x.shape)
    out[0], out[1] = y0, y1
    for n in range(1, nmax):
        out[n + 1] = 2.0 * n / x * out[n] - out[n - 1]
    return out[: nmax + 1]


def jn(n: int, x) -> np.ndarray:
    if n < 0:
        return (-1) ** n * jn(-n, x)
    return j_table(n, x)[n]


def yn(n: int, x) -> np.ndarray:
    if n < 0:
        return (-1) ** n * yn(-n, x)
    return y_table(n, x)[n]


def jn_prime(n: int, x) -> np.ndarray:
    if n == 0:
        return -jn(1, x)
    t = j_table(n + 1, x)
    return 0.5 * (t[n - 1] - t[n + 1])


def yn_prime(n: int, x) -> np.ndarray:
    if n == 0:
        return -yn(1, x)
    t = y_table(n + 1, x)
    return 0.5 * (t[n - 1] - t[n + 1])


def cylinder(kind: str, n: int, x):
    """Cylinder function ``J_n(x)`` or ``Y_n(x)``; ``kind`` is ``"J"`` or ``"Y"``.

    Returns a float for scalar input.
    """
    kind = kind.upper()
    if kind == "J":
        val = jn(n, x)
    elif kind in ("Y", "N"):
        val = yn(n, x)
    else:
        raise DomainError(f"unknown cylinder function kind {kind!r}")
    return float(val) if np.ndim(val) == 0 else val
