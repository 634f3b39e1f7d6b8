"""Jacobi elliptic functions by the descending Landen (AGM) scheme."""

import math

import numpy as np

from .errors import DomainError

_TINY = 1e-17


def _check_modulus(m):
    if not (0.0 <= m <= 1.0) or math.isnan(m):
        raise DomainError(f"parameter m={m!r} outside [0, 1]")


def agm(a, b, tol=1e-16):
    """Arithmetic-geometric mean of two nonnegative numbers."""
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def ellipk(m):
    """Complete elliptic integral of the first kind K(m)."""
    _check_modulus(m)
    if m == 1.0:
        return math.inf
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def eval_jacobi(u, m):
    """Return ``(sn, cn, dn)`` at argument ``u`` (scalar or array) and parameter ``m``.

    Uses the descending Landen sequence a_n, b_n, c_n of the AGM started at
    (1, sqrt(1-m)) followed by the backward amplitude recursion.  The two
    limiting parameters are handled in closed form.
    """
    _check_modulus(m)
    u_arr = np.asarray(u, dtype=float)
    if m == 0.0:
        out = (np.sin(u_arr), np.cos(u_arr), np.ones_like(u_arr))
    elif m == 1.0:
        sech = 1.0 / np.cosh(u_arr)
        out = (np.tanh(u_arr), sech, sech.copy())
    else:
        a = [1.0]
        c = [math.sqrt(m)]
        b = math.sqrt(1.0 - m)
        while abs(c[-1]) > _TINY * a[-1] and len(a) < 40:
            an = 0.5 * (a[-1] + b)
            c.append(0.5 * (a[-1] - b))
            b = math.sqrt(a[-1] * b)
            a.append(an)
        n = len(a) - 1
        phi = (2.0 ** n) * a[n] * u_arr
        for k in range(n, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c[k] / a[k] * np.sin(phi)))
        sn = np.sin(phi)
        cn = np.cos(phi)
        # 1 - m sn^2 written as (1 - m) + m cn^2 has no cancellation
        dn = np.sqrt((1.0 - m) + m * cn * cn)
        out = (sn, cn, dn)
    if np.ndim(u) == 0:
        return tuple(float(v) for v in out)
    return out
