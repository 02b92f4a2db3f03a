"""Probability measures on SU(1,1) and their Eisenstein transforms.

The transform of mu is the matrix int Phi(g^-1) mu(dg).  Measures come in three
variants (a single atom, a finite weighted mixture, an equally weighted sample)
and all of them are stored as arrays of (a, b, weight).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .eisenstein import DISC_MODE_STRIDE, EisensteinMatrix, choose_nodes, entries_from_samples
from .errors import InvariantViolation, NotInvariantised
from .group import GroupElement, _defect, mul_arrays
from .tolerances import EPS_GRP

VARIANTS = ("dirac", "discrete", "empirical")


@dataclass(frozen=True)
class Measure:
    variant: str
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    invariantised: bool = False
    approximate: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown measure variant {self.variant!r}")
        if self.a.shape != self.b.shape or self.a.shape != self.w.shape or self.a.ndim != 1:
            raise ValueError("a, b, w must be 1-d arrays of equal length")
        if self.a.size == 0:
            raise ValueError("a measure needs at least one atom")
        if self.variant == "dirac" and self.a.size != 1:
            raise ValueError("a Dirac measure has exactly one atom")
        if np.any(self.w <= 0):
            raise ValueError("weights must be positive")
        if abs(self.w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {self.w.sum()!r}, not 1")
        if np.any(np.abs(_defect(self.a, self.b)) > EPS_GRP):
            raise InvariantViolation("an atom is not in SU(1,1)")

    @classmethod
    def dirac(cls, g: GroupElement) -> Measure:
        return cls("dirac", np.array([g.a]), np.array([g.b]), np.array([1.0]))

    @classmethod
    def discrete(cls, atoms, invariantised: bool = False) -> Measure:
        """From an iterable of (GroupElement, weight) pairs."""
        atoms = list(atoms)
        a = np.array([g.a for g, _ in atoms], dtype=complex)
        b = np.array([g.b for g, _ in atoms], dtype=complex)
        w = np.array([wt for _, wt in atoms], dtype=float)
        return cls("discrete", a, b, w, invariantised)

    @classmethod
    def empirical(cls, samples=None, a=None, b=None, invariantised: bool = False,
                  approximate: bool = False) -> Measure:
        """From a list of GroupElement or from parallel arrays a, b."""
        if samples is not None:
            samples = list(samples)
            a = np.array([g.a for g in samples], dtype=complex)
            b = np.array([g.b for g in samples], dtype=complex)
        a = np.asarray(a, dtype=complex).reshape(-1)
        b = np.asarray(b, dtype=complex).reshape(-1)
        w = np.full(a.shape, 1.0 / max(a.size, 1))
        return cls("empirical", a, b, w, invariantised, approximate)

    def __len__(self) -> int:
        return self.a.size

    @property
    def atoms(self) -> list[tuple[GroupElement, float]]:
        return [(GroupElement(x, y), float(wt)) for x, y, wt in zip(self.a, self.b, self.w)]

    def with_flag(self, invariantised: bool) -> Measure:
        return Measure(self.variant, self.a, self.b, self.w, invariantised, self.approximate)


@dataclass(frozen=True)
class CharacteristicRow:
    lam: float
    N: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, n: int) -> complex:
        return complex(self.values[n + self.N])


def _merge(a, b, w, tol=EPS_GRP):
    """Combine atoms closer than ``tol`` in matrix distance, adding their weights."""
    keep_a, keep_b, keep_w = [], [], []
    order = np.lexsort((b.imag, b.real, a.imag, a.real))
    for k in order:
        if keep_a:
            d = np.sqrt(2 * np.abs(np.array(keep_a) - a[k]) ** 2 + 2 * np.abs(np.array(keep_b) - b[k]) ** 2)
            j = int(np.argmin(d))
            if d[j] < tol:
                keep_w[j] += w[k]
                continue
        keep_a.append(a[k])
        keep_b.append(b[k])
        keep_w.append(w[k])
    w = np.array(keep_w)
    return np.array(keep_a), np.array(keep_b), w / w.sum()


def convolve(mu1: Measure, mu2: Measure) -> Measure:
    """The law of g1 g2 with g1 ~ mu1 and g2 ~ mu2 independent.

    Finite measures convolve exactly (outer product of atoms, near-equal atoms
    merged).  A sample is shifted exactly by a Dirac; two samples of equal size
    are paired index by index, which is a valid draw only when they are
    independent, so the result is flagged approximate.
    """
    emp1 = mu1.variant == "empirical"
    emp2 = mu2.variant == "empirical"
    if not emp1 and not emp2:
        a, b = mul_arrays(mu1.a[:, None], mu1.b[:, None], mu2.a[None, :], mu2.b[None, :])
        w = (mu1.w[:, None] * mu2.w[None, :]).reshape(-1)
        if mu1.variant == "dirac" and mu2.variant == "dirac":
            return Measure("dirac", a.reshape(-1), b.reshape(-1), w)
        a, b, w = _merge(a.reshape(-1), b.reshape(-1), w)
        return Measure("discrete", a, b, w)
    if mu1.variant == "dirac" or mu2.variant == "dirac":
        a, b = mul_arrays(mu1.a, mu1.b, mu2.a, mu2.b)
        src = mu2 if emp2 else mu1
        return Measure.empirical(a=a, b=b, approximate=src.approximate)
    if emp1 and emp2 and len(mu1) == len(mu2):
        a, b = mul_arrays(mu1.a, mu1.b, mu2.a, mu2.b)
        return Measure.empirical(a=a, b=b, approximate=True)
    raise ValueError("convolution of a sample with a mixture, or of samples of unequal size, is not supported")


def right_K_invariantise(mu: Measure, k_nodes: int = 64) -> Measure:
    """Average mu over the rotation group with k_nodes equispaced angles.

    Atoms become kappa(theta_j) g.  Under the g -> g^-1 convention of the
    transform this is the measure whose inverse law is right-K-invariant, and its
    transform keeps only the trivial row n' = 0 (exactly for |n'| < k_nodes).
    """
    if k_nodes < 1:
        raise ValueError("k_nodes must be positive")
    theta = 2 * np.pi * np.arange(k_nodes) / k_nodes
    rot = np.exp(1j * theta)
    a = (rot[:, None] * mu.a[None, :]).reshape(-1)
    b = (rot[:, None] * mu.b[None, :]).reshape(-1)
    w = np.repeat(1.0 / k_nodes, k_nodes)[:, None] * mu.w[None, :]
    a, b, w = _merge(a, b, w.reshape(-1))
    return Measure("discrete", a, b, w, invariantised=True, approximate=mu.approximate)


def eisenstein_transform(mu: Measure, lam: float, N: int, nodes: int | None = None,
                         k_average: bool = True) -> EisensteinMatrix:
    """int Phi(g^-1) mu(dg) on the window [-N, N].

    For a measure flagged as invariantised the rows n' != 0 are zero in exact
    arithmetic; with ``k_average`` they are projected out, which removes the
    remaining rounding (or, for samples, the Monte Carlo noise).
    """
    ia, ib = np.conj(mu.a), -mu.b
    L = choose_nodes(ia, ib, lam, N, nodes)
    entries = entries_from_samples(ia, ib, mu.w, lam, N, L)
    if mu.invariantised and k_average:
        row = entries[N].copy()
        entries[:] = 0
        entries[N] = row
    return EisensteinMatrix(float(lam), int(N), entries)


def symmetric_row(mu: Measure, lam: float, N: int, nodes: int | None = None) -> CharacteristicRow:
    """Row n' = 0 of the transform; n = 0 is the spherical transform int phi_lam(g^-1) mu(dg)."""
    if not mu.invariantised:
        raise NotInvariantised("symmetric_row needs a K-invariantised measure")
    return CharacteristicRow(float(lam), int(N), eisenstein_transform(mu, lam, N, nodes).row(0))


def helgason_ft(mu: Measure, lam: float, beta_grid, N: int, nodes: int | None = None) -> np.ndarray:
    """Boundary Fourier synthesis of the symmetric row.

    Group mode n = 2m carries disc mode m, and the result is
    sum_m row[2m] e^{-i m beta} = int e^{(i lam + 1) <z, e^{i beta}>} dnu(z) where nu is the
    law of z = b / conj(a) for g^-1.
    """
    row = symmetric_row(mu, lam, N, nodes)
    beta = np.asarray(beta_grid, dtype=float)
    m = np.arange(-(N // DISC_MODE_STRIDE), N // DISC_MODE_STRIDE + 1)
    coeff = np.array([row[DISC_MODE_STRIDE * k] for k in m])
    return np.exp(-1j * np.outer(beta, m)) @ coeff


# --------------------------------------------------------------------------
# JSON


def measure_to_json(mu: Measure) -> str:
    atoms = [
        {"g": [float(x.real), float(x.imag), float(y.real), float(y.imag)], "w": float(wt)}
        for x, y, wt in zip(mu.a, mu.b, mu.w)
    ]
    return json.dumps({"variant": mu.variant, "atoms": atoms, "invariantised": mu.invariantised})


def measure_from_json(text: str) -> Measure:
    d = json.loads(text)
    g = np.array([at["g"] for at in d["atoms"]], dtype=float).reshape(-1, 4)
    a = g[:, 0] + 1j * g[:, 1]
    b = g[:, 2] + 1j * g[:, 3]
    flag = bool(d.get("invariantised", False))
    if d["variant"] == "empirical":
        return Measure.empirical(a=a, b=b, invariantised=flag)
    w = np.array([at["w"] for at in d["atoms"]], dtype=float)
    return Measure(d["variant"], a, b, w, flag)
