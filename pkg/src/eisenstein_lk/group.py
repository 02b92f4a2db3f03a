"""SU(1,1): group law, exponential and logarithm, Iwasawa factors, disc model.

An element is stored as the pair (a, b) of the matrix [[a, b], [conj(b), conj(a)]].
The Lie algebra uses the ordered basis

    X1 = [[0, 1], [1, 0]] / sqrt(2)
    X2 = [[0, i], [-i, 0]] / sqrt(2)
    X3 = [[i, 0], [0, -i]]

so X1, X2 span p (orthonormal) and X3 spans k.  K is {kappa(psi) = diag(e^{i psi}, e^{-i psi})},
A is {exp(tH)} with H = sqrt(2) X1 and N = {[[1+is, -is], [is, 1-is]]}.

The ``*_arrays`` helpers are the vectorised forms used by the quadrature and
simulation code; they take and return numpy arrays of a and b.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BranchError, DomainError, InvariantViolation
from .tolerances import (
    BRANCH_MARGIN,
    CUTOFF_INNER,
    CUTOFF_OUTER,
    DELTA_SERIES,
    EPS_GRP,
)

SQRT2 = math.sqrt(2.0)

X1 = np.array([[0, 1], [1, 0]], dtype=complex) / SQRT2
X2 = np.array([[0, 1j], [-1j, 0]], dtype=complex) / SQRT2
X3 = np.array([[1j, 0], [0, -1j]], dtype=complex)
BASIS = (X1, X2, X3)
H = np.array([[0, 1], [1, 0]], dtype=complex)


def _defect(a, b):
    """Signed defect of the SU(1,1) constraint, scaled to the size of the element."""
    aa = np.abs(a) ** 2
    bb = np.abs(b) ** 2
    return (aa - bb - 1.0) / np.maximum(1.0, aa + bb)


@dataclass(frozen=True, slots=True)
class GroupElement:
    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        d = _defect(self.a, self.b)
        if not abs(d) <= EPS_GRP:
            raise InvariantViolation(f"|a|^2 - |b|^2 - 1 = {d:.3e} (relative) exceeds {EPS_GRP:g}")

    @classmethod
    def identity(cls) -> GroupElement:
        return cls(1.0, 0.0)

    @classmethod
    def from_matrix(cls, m) -> GroupElement:
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if abs(m[1, 0] - np.conj(m[0, 1])) > 1e-12 or abs(m[1, 1] - np.conj(m[0, 0])) > 1e-12:
            raise InvariantViolation("matrix is not of the form [[a, b], [conj b, conj a]]")
        return cls(m[0, 0], m[0, 1])

    @classmethod
    def from_fields(cls, fields) -> GroupElement:
        """Build from the serialised order (re_a, im_a, re_b, im_b)."""
        re_a, im_a, re_b, im_b = (float(x) for x in fields)
        return cls(complex(re_a, im_a), complex(re_b, im_b))

    def fields(self) -> tuple[float, float, float, float]:
        return (self.a.real, self.a.imag, self.b.real, self.b.imag)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return mul(self, other)

    def inverse(self) -> GroupElement:
        return inverse(self)


class AlgebraVector(NamedTuple):
    c1: float
    c2: float
    c3: float

    @property
    def matrix(self) -> np.ndarray:
        return self.c1 * X1 + self.c2 * X2 + self.c3 * X3

    def __neg__(self) -> AlgebraVector:
        return AlgebraVector(-self.c1, -self.c2, -self.c3)

    def scaled(self, s: float) -> AlgebraVector:
        return AlgebraVector(s * self.c1, s * self.c2, s * self.c3)


class IwasawaFactors(NamedTuple):
    s: float
    t: float
    psi: float


# --------------------------------------------------------------------------
# vectorised kernels


def mul_arrays(a1, b1, a2, b2):
    a = a1 * a2 + b1 * np.conj(b2)
    b = a1 * b2 + b1 * np.conj(a2)
    return a, b


def exp_alg_arrays(c):
    """exp of c[..., 0] X1 + c[..., 1] X2 + c[..., 2] X3, returned as (a, b)."""
    c = np.asarray(c, dtype=float)
    c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2]
    delta = 0.5 * (c1 * c1 + c2 * c2) - c3 * c3
    ch, shc = _cosh_sinhc(delta)
    a = ch + 1j * c3 * shc
    b = (c1 + 1j * c2) / SQRT2 * shc
    return a, b


def _cosh_sinhc(delta):
    """cosh(sqrt(delta)) and sinh(sqrt(delta))/sqrt(delta), entire in delta."""
    delta = np.asarray(delta, dtype=float)
    ch = np.empty_like(delta)
    shc = np.empty_like(delta)
    small = np.abs(delta) < DELTA_SERIES
    pos = (delta >= DELTA_SERIES)
    neg = (delta <= -DELTA_SERIES)
    d = delta[small]
    ch[small] = 1 + d / 2 * (1 + d / 12 * (1 + d / 30 * (1 + d / 56)))
    shc[small] = 1 + d / 6 * (1 + d / 20 * (1 + d / 42 * (1 + d / 72)))
    w = np.sqrt(delta[pos])
    ch[pos] = np.cosh(w)
    shc[pos] = np.sinh(w) / w
    w = np.sqrt(-delta[neg])
    ch[neg] = np.cos(w)
    shc[neg] = np.sin(w) / w
    return ch, shc


def iwasawa_arrays(a, b):
    """Vectorised Iwasawa factors (s, t, psi) with g = n(s) exp(tH) kappa(psi).

    Multiplying out n(s) exp(tH) kappa(psi) gives (a - conj b) e^{-i psi} = e^{-t}
    and a e^{-i psi} = cosh t + i s e^{-t}, which this inverts directly.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    w = a - np.conj(b)
    psi = np.mod(np.angle(w), 2 * np.pi)
    t = -np.log(np.abs(w))
    s = np.exp(t) * np.imag(a * np.exp(-1j * psi))
    return s, t, psi


def to_disc_arrays(a, b):
    return np.asarray(b) / np.conj(np.asarray(a))


def project_arrays(a, b):
    """Rescale (a, b) so that |a|^2 - |b|^2 = 1 exactly (up to rounding)."""
    norm = np.sqrt(np.abs(a) ** 2 - np.abs(b) ** 2)
    return a / norm, b / norm


# --------------------------------------------------------------------------
# scalar API


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.a * h.a + g.b * h.b.conjugate(), g.a * h.b + g.b * h.a.conjugate())


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.a.conjugate(), -g.b)


def project_to_group(g_or_a, b=None) -> GroupElement:
    """Return the nearest element (by radial rescaling) satisfying the invariant exactly."""
    if b is None:
        a, b = g_or_a.a, g_or_a.b
    else:
        a = g_or_a
    n = math.sqrt(abs(a) ** 2 - abs(b) ** 2)
    return GroupElement(a / n, b / n)


def kappa(psi: float) -> GroupElement:
    return GroupElement(cmath.exp(1j * psi), 0.0)


def a_t(t: float) -> GroupElement:
    """exp(tH) = [[cosh t, sinh t], [sinh t, cosh t]]."""
    return GroupElement(math.cosh(t), math.sinh(t))


def n_s(s: float) -> GroupElement:
    return GroupElement(1 + 1j * s, -1j * s)


def reconstruct(f: IwasawaFactors) -> GroupElement:
    return n_s(f.s) @ a_t(f.t) @ kappa(f.psi)


def exp_alg(v) -> GroupElement:
    """exp(c1 X1 + c2 X2 + c3 X3) in closed form: cosh(sqrt D) I + sinhc(sqrt D) X."""
    a, b = exp_alg_arrays(np.asarray(tuple(v), dtype=float))
    return GroupElement(complex(a), complex(b))


def log_group(g: GroupElement) -> AlgebraVector:
    """Principal logarithm; inverse of :func:`exp_alg` away from the rotation-by-pi cut.

    With X = log g we have X^2 = Delta I and |b|^2 - Im(a)^2 = sinh^2(sqrt Delta), which
    is computed from small quantities near e and so keeps full relative accuracy there.
    """
    a, b = g.a, g.b
    d = abs(b) ** 2 - a.imag ** 2
    if d >= 0.0:
        if a.real <= 0.0:
            raise BranchError("trace <= -2: element has no principal logarithm")
        sq = math.sqrt(d)
        w = math.asinh(sq)
        shc = sq / w if w > 0 else 1.0
    else:
        sq = math.sqrt(-d)
        w = math.atan2(sq, a.real)
        if w > math.pi - BRANCH_MARGIN:
            raise BranchError(f"rotation angle {w:.6f} too close to pi")
        shc = sq / w if w > 1e-300 else 1.0
    if w < 1e-8:
        shc = 1.0 + (d / 6.0)
    beta = b / shc
    return AlgebraVector(SQRT2 * beta.real, SQRT2 * beta.imag, a.imag / shc)


def iwasawa(g: GroupElement) -> IwasawaFactors:
    s, t, psi = iwasawa_arrays(g.a, g.b)
    return IwasawaFactors(float(s), float(t), float(psi))


def dist_f(g: GroupElement, h: GroupElement | None = None) -> float:
    """Euclidean distance between the 2x2 matrices of g and h (h defaults to e)."""
    ha, hb = (1.0, 0.0) if h is None else (h.a, h.b)
    return math.sqrt(2 * abs(g.a - ha) ** 2 + 2 * abs(g.b - hb) ** 2)


def _smooth_step(u: float) -> float:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    f0 = math.exp(-1.0 / u)
    f1 = math.exp(-1.0 / (1.0 - u))
    return f0 / (f0 + f1)


def cutoff(g: GroupElement, r0: float = CUTOFF_INNER, r1: float = CUTOFF_OUTER) -> float:
    return 1.0 - _smooth_step((dist_f(g) - r0) / (r1 - r0))


def canonical_coords(g: GroupElement, r0: float = CUTOFF_INNER, r1: float = CUTOFF_OUTER):
    """Compactly supported coordinates x(g) = chi(g) log(g), with x(g^-1) = -x(g)."""
    chi = cutoff(g, r0, r1)
    if chi == 0.0:
        return (0.0, 0.0, 0.0)
    try:
        v = log_group(g)
    except BranchError:
        return (0.0, 0.0, 0.0)
    if chi == 1.0:
        return (v.c1, v.c2, v.c3)
    return (chi * v.c1, chi * v.c2, chi * v.c3)


def to_disc(g: GroupElement) -> complex:
    """Coset gK as a point of the Poincare disc, z = b / conj(a)."""
    return g.b / g.a.conjugate()


def horocycle_bracket(z: complex, beta):
    """<z, e^{i beta}> = (1/2) log((1 - |z|^2) / |z - e^{i beta}|^2).

    ``beta`` may be an array; e^{2<z,b>} is the Poisson kernel of the disc.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disc")
    bnd = np.exp(1j * np.asarray(beta, dtype=float))
    return 0.5 * (math.log1p(-abs(z) ** 2) - np.log(np.abs(z - bnd) ** 2))
