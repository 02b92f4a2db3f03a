"""Special functions behind the closed-form disc entries.

``phi_closed(lam, n, r)`` is the hypergeometric expression

    r^|n| Gamma(|n| + nu) / (Gamma(nu) |n|!) 2F1(nu, 1 - nu; |n| + 1; r^2 / (r^2 - 1)),
    nu = (1 + i lam) / 2,

and ``phi_disc`` attaches the angular factor e^{i n arg z}.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import special

from .errors import DomainError, NonConvergence, PoleError
from .tolerances import HYP_RTOL, HYP_TERM_CAP


def nu_of(lam: float) -> complex:
    return 0.5 * (1.0 + 1j * lam)


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z)."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    return complex(special.loggamma(complex(z)))


def _series(a: complex, b: complex, c: complex, x: float, cap: int) -> complex:
    total = 1.0 + 0j
    term = 1.0 + 0j
    for k in range(cap):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
        if term == 0 or abs(term) <= HYP_RTOL * abs(total):
            return total
    raise NonConvergence(f"2F1({a}, {b}; {c}; {x}) needs more than {cap} terms")


def gauss_2f1(a: complex, b: complex, c: complex, x: float, term_cap: int = HYP_TERM_CAP) -> complex:
    """Gauss hypergeometric function on x <= 0.

    Direct series on [-1/2, 0]; below that the Pfaff transformation
    2F1(a, b; c; x) = (1 - x)^-a 2F1(a, c - b; c; x / (x - 1)) moves the argument into (1/3, 1).
    The direct series is slow and cancels badly as x approaches -1, hence the early switch.
    """
    if _is_nonpositive_integer(c):
        raise PoleError(f"2F1 is undefined for c = {c}")
    x = float(x)
    if x > 0:
        raise DomainError("gauss_2f1 is only implemented for x <= 0")
    if x == 0.0:
        return 1.0 + 0j
    if x >= -0.5:
        return _series(a, b, c, x, term_cap)
    return (1.0 - x) ** (-a) * _series(a, c - b, c, x / (x - 1.0), term_cap)


def phi_closed(lam: float, n: int, r: float) -> complex:
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r = {r} outside [0, 1)")
    m = abs(int(n))
    if r == 0.0:
        return 1.0 + 0j if m == 0 else 0j
    nu = nu_of(lam)
    log_ratio = log_gamma(m + nu) - log_gamma(nu) - log_gamma(m + 1)
    x = r * r / (r * r - 1.0)
    return r**m * cmath.exp(log_ratio) * gauss_2f1(nu, 1.0 - nu, m + 1, x)


def phi_disc(lam: float, n: int, z: complex) -> complex:
    z = complex(z)
    r = abs(z)
    if r >= 1.0:
        raise DomainError(f"|z| = {r} is not inside the unit disc")
    if r == 0.0:
        return 1.0 + 0j if n == 0 else 0j
    return cmath.exp(1j * n * cmath.phase(z)) * phi_closed(lam, n, r)


def phi_closed_array(lam: float, n: int, r) -> np.ndarray:
    """phi_closed over an array of radii (loops; used for per-sample spherical values)."""
    r = np.asarray(r, dtype=float)
    out = np.empty(r.shape, dtype=complex)
    flat = out.reshape(-1)
    for i, ri in enumerate(r.reshape(-1)):
        flat[i] = phi_closed(lam, n, float(ri))
    return out
