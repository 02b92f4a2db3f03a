"""Generalised Eisenstein integrals of the principal series of SU(1,1).

For a spectral parameter lam and integer modes n', n the entry is

    Phi[n', n](g) = (1/2pi) int_0^{2pi} e^{(i lam + 1) A(kappa(theta) g)} e^{i n' psi(kappa(theta) g) - i n theta} dtheta

with A and psi the A- and K-components of the Iwasawa decomposition.  Writing
x = e^{i theta} a - e^{-i theta} conj(b) we have e^{-A} = |x| and e^{i psi} = x / |x|, so the
integrand for every n' comes from one sweep over the nodes, and the theta
integral for every n is one FFT.

Matrices follow entries[n'][n] = Phi[n', n]; with this ordering Phi(gh) = Phi(h) Phi(g)
and Phi(kappa(phi)) = diag(e^{i n phi}).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import MethodDisagreement, NonConvergence, WindowMismatch
from .group import BASIS, GroupElement, exp_alg, inverse
from .tolerances import ADAPTIVE_TOL, DEFAULT_NODES, MAX_NODES, RHO_AGREEMENT, RHO_STEP

# Group mode n = 2m carries the disc (boundary) mode m; odd group modes belong to
# the non-trivial character of M = {+I, -I} and never meet the disc functions.
DISC_MODE_STRIDE = 2


def group_mode(m: int) -> int:
    return DISC_MODE_STRIDE * m


@dataclass(frozen=True)
class EisensteinMatrix:
    lam: float
    N: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.entries.shape != (2 * self.N + 1, 2 * self.N + 1):
            raise WindowMismatch(f"entries of shape {self.entries.shape} do not fit window N={self.N}")

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def __getitem__(self, key):
        nprime, n = key
        return self.entries[nprime + self.N, n + self.N]

    def restrict(self, N: int) -> EisensteinMatrix:
        if N > self.N:
            raise WindowMismatch(f"cannot restrict window {self.N} to larger window {N}")
        lo = self.N - N
        return EisensteinMatrix(self.lam, N, self.entries[lo:lo + 2 * N + 1, lo:lo + 2 * N + 1].copy())

    def row(self, nprime: int = 0) -> np.ndarray:
        return self.entries[nprime + self.N].copy()

    def __matmul__(self, other: EisensteinMatrix) -> EisensteinMatrix:
        if other.N != self.N:
            raise WindowMismatch(f"windows {self.N} and {other.N} differ")
        return EisensteinMatrix(self.lam, self.N, self.entries @ other.entries)


# --------------------------------------------------------------------------
# quadrature


def entries_from_samples(a, b, w, lam, N, nodes):
    """Weighted sum of Phi(g_k) over elements (a_k, b_k) at a fixed node count."""
    if nodes < max(4, 2 * N + 1):
        raise ValueError(f"need at least {max(4, 2 * N + 1)} nodes for window {N}, got {nodes}")
    a = np.ascontiguousarray(a, dtype=complex).reshape(-1)
    b = np.ascontiguousarray(b, dtype=complex).reshape(-1)
    w = np.ascontiguousarray(w, dtype=float).reshape(-1)
    G = _kernels.accumulate_modes(a, b, w, lam, N, nodes)
    F = np.fft.fft(G, axis=1) / nodes
    return F[:, np.arange(-N, N + 1) % nodes]


def choose_nodes(a, b, lam, N, nodes=None):
    """Node count for the elements (a, b): fixed if given, otherwise doubled from the
    default until the hardest element (largest |b|) converges to the adaptive tolerance."""
    if nodes is not None:
        return int(nodes)
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    k = int(np.argmax(np.abs(b)))
    L = max(DEFAULT_NODES, 4 * N + 4)
    prev = entries_from_samples(a[k:k + 1], b[k:k + 1], [1.0], lam, N, L)
    while L < MAX_NODES:
        L *= 2
        cur = entries_from_samples(a[k:k + 1], b[k:k + 1], [1.0], lam, N, L)
        if np.max(np.abs(cur - prev)) < ADAPTIVE_TOL:
            return L // 2
        prev = cur
    raise NonConvergence(f"quadrature did not settle below {ADAPTIVE_TOL} with {MAX_NODES} nodes")


def phi_matrix(lam: float, N: int, g: GroupElement, nodes: int | None = None) -> EisensteinMatrix:
    L = choose_nodes(g.a, g.b, lam, N, nodes)
    return EisensteinMatrix(float(lam), int(N), entries_from_samples([g.a], [g.b], [1.0], lam, N, L))


def phi_sharp_matrix(lam: float, N: int, g: GroupElement, nodes: int | None = None) -> EisensteinMatrix:
    """Phi evaluated at g^-1."""
    return phi_matrix(lam, N, inverse(g), nodes)


def phi_entry(lam: float, nprime: int, n: int, g: GroupElement, nodes: int | None = None) -> complex:
    N = max(abs(nprime), abs(n))
    return complex(phi_matrix(lam, N, g, nodes)[nprime, n])


def radon_nikodym_mean(g: GroupElement, nodes: int | None = None) -> float:
    """(1/2pi) int e^{2 A(kappa(theta) g)} dtheta, which equals 1 for every g.

    Without ``nodes`` the count starts at 256 and doubles until the value settles.
    """
    def mean(L):
        theta = 2 * np.pi * np.arange(L) / L
        x = np.exp(1j * theta) * g.a - np.exp(-1j * theta) * np.conj(g.b)
        return float(np.mean(np.abs(x) ** -2.0))

    if nodes is not None:
        return mean(nodes)
    L, prev = 256, mean(256)
    while L < MAX_NODES:
        L *= 2
        cur = mean(L)
        if abs(cur - prev) < 1e-14:
            return cur
        prev = cur
    raise NonConvergence("Radon-Nikodym quadrature did not settle")


# --------------------------------------------------------------------------
# infinitesimal coefficients


@dataclass(frozen=True)
class RhoTensor:
    lam: float
    N: int
    entries: np.ndarray = field(repr=False)  # shape (3, 2N+1, 2N+1)
    method: str = "analytic"
    disagreement: float | None = None

    def matrix(self, i: int) -> np.ndarray:
        """Slice for basis vector X_i, i in {1, 2, 3}."""
        return self.entries[i - 1]

    def restrict(self, N: int) -> RhoTensor:
        if N > self.N:
            raise WindowMismatch(f"cannot restrict window {self.N} to larger window {N}")
        lo = self.N - N
        sl = slice(lo, lo + 2 * N + 1)
        return RhoTensor(self.lam, N, self.entries[:, sl, sl].copy(), self.method, self.disagreement)


def _rho_analytic(lam: float, N: int) -> np.ndarray:
    """Differentiate the induced representation directly.

    For Y = Ad(kappa(theta)) X the derivatives of the Iwasawa components along
    exp(sX) at s = 0 are dA = Re Y[0,1] and dpsi = Im Y[0,1] + Im Y[0,0], so

        (d xi(X) f_n')(theta) = ((i lam + 1) dA + i n' dpsi) e^{i n' theta},

    a trigonometric polynomial of degree |n'| + 2 whose Fourier coefficients an
    FFT with more than 2N + 4 nodes returns exactly.
    """
    L = 4 * N + 8
    theta = 2 * np.pi * np.arange(L) / L
    modes = np.arange(-N, N + 1)
    out = np.empty((3, 2 * N + 1, 2 * N + 1), dtype=complex)
    for i, X in enumerate(BASIS):
        y01 = np.exp(2j * theta) * X[0, 1]
        dA = y01.real
        dpsi = y01.imag + X[0, 0].imag
        f = ((1j * lam + 1) * dA[None, :] + 1j * modes[:, None] * dpsi[None, :]) * np.exp(
            1j * modes[:, None] * theta[None, :]
        )
        F = np.fft.fft(f, axis=1) / L
        out[i] = F[:, modes % L]
    return out


def _rho_finite_diff(lam: float, N: int, h: float, nodes: int | None) -> np.ndarray:
    out = np.empty((3, 2 * N + 1, 2 * N + 1), dtype=complex)
    for i in range(3):
        def central(step):
            v = np.zeros(3)
            v[i] = step
            plus = phi_matrix(lam, N, exp_alg(v), nodes).entries
            minus = phi_matrix(lam, N, exp_alg(-v), nodes).entries
            return (plus - minus) / (2 * step)

        out[i] = (4 * central(h / 2) - central(h)) / 3
    return out


def rho_tensor(lam: float, N: int, method: str = "analytic", cross_check: bool = True,
               h: float = RHO_STEP, nodes: int | None = None) -> RhoTensor:
    """rho[i][n'][n] = d/ds Phi[n', n](exp(s X_i)) at s = 0.

    ``method`` selects which route is returned; with ``cross_check`` the other
    route is computed too and MethodDisagreement is raised when they differ by more
    than the agreement tolerance.
    """
    if method not in ("analytic", "finite_diff"):
        raise ValueError(f"unknown rho method {method!r}")
    analytic = _rho_analytic(lam, N) if (method == "analytic" or cross_check) else None
    fd = _rho_finite_diff(lam, N, h, nodes) if (method == "finite_diff" or cross_check) else None
    gap = None
    if cross_check:
        gap = float(np.max(np.abs(analytic - fd)))
        if gap > RHO_AGREEMENT:
            raise MethodDisagreement(f"analytic and finite-difference rho differ by {gap:.3e}")
    entries = analytic if method == "analytic" else fd
    return RhoTensor(float(lam), int(N), entries, method, gap)


# --------------------------------------------------------------------------
# CSV


def _fmt(x: float) -> str:
    return "%.17g" % x


def matrix_to_csv(entries: np.ndarray, N: int, extra: dict[str, np.ndarray] | None = None) -> str:
    """CSV with header nprime,n,re,im (plus optional extra columns), rows sorted by (n', n)."""
    extra = extra or {}
    buf = io.StringIO()
    buf.write(",".join(["nprime", "n", "re", "im", *extra]) + "\n")
    for i, nprime in enumerate(range(-N, N + 1)):
        for j, n in enumerate(range(-N, N + 1)):
            z = entries[i, j]
            cols = [str(nprime), str(n), _fmt(z.real), _fmt(z.imag)]
            cols += [_fmt(float(v[i, j])) for v in extra.values()]
            buf.write(",".join(cols) + "\n")
    return buf.getvalue()


def matrix_from_csv(text: str) -> tuple[int, np.ndarray]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    if header[:4] != ["nprime", "n", "re", "im"]:
        raise ValueError(f"unexpected header {lines[0]!r}")
    rows = [ln.split(",") for ln in lines[1:]]
    N = max(abs(int(r[0])) for r in rows)
    out = np.zeros((2 * N + 1, 2 * N + 1), dtype=complex)
    for r in rows:
        out[int(r[0]) + N, int(r[1]) + N] = complex(float(r[2]), float(r[3]))
    return N, out
