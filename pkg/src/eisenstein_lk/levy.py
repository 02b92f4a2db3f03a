"""Lévy processes on SU(1,1) from a generator triple (drift, diffusion, finite jump measure).

The scheme multiplies on the right:

    Z_{k+1} = Z_k exp(b_c dt + sigma xi_k sqrt(dt)) J_k,   sigma sigma^T = 2 a,

where b_c = b - sum_atoms rate x(atom) compensates the jump coordinates, xi_k is a
standard normal vector and J_k is the product (in time order) of the jump atoms
whose clocks ring during the step.  Each path draws from its own Philox stream
keyed by (seed, path index), so results do not depend on how paths are batched.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigError, OutOfRange
from .group import GroupElement, canonical_coords, dist_f
from .tolerances import EPS_GRP, MAX_JUMP_RATE_DT, RENORM_EVERY
from .transform import Measure

BLOCK_PATHS = 1000


@dataclass(frozen=True)
class LevyMeasureDiscrete:
    atoms: tuple[tuple[GroupElement, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((g, float(r)) for g, r in self.atoms))
        for g, r in self.atoms:
            if not r > 0 or not math.isfinite(r):
                raise ConfigError(f"jump rate must be positive and finite, got {r}")
            if dist_f(g) < EPS_GRP:
                raise ConfigError("a Lévy measure may not charge the identity")

    @property
    def total_rate(self) -> float:
        return float(sum(r for _, r in self.atoms))

    @property
    def rates(self) -> np.ndarray:
        return np.array([r for _, r in self.atoms], dtype=float)

    @property
    def coords(self) -> np.ndarray:
        """Canonical coordinates x(atom), one row per atom."""
        return np.array([canonical_coords(g) for g, _ in self.atoms], dtype=float).reshape(-1, 3)


@dataclass(frozen=True)
class GeneratorTriple:
    drift: np.ndarray
    diffusion: np.ndarray
    levy: LevyMeasureDiscrete = field(default_factory=LevyMeasureDiscrete)

    def __post_init__(self):
        b = np.asarray(self.drift, dtype=float).reshape(-1)
        a = np.asarray(self.diffusion, dtype=float)
        if b.shape != (3,):
            raise ConfigError(f"drift needs 3 components, got shape {b.shape}")
        if a.shape != (3, 3):
            raise ConfigError(f"diffusion must be 3x3, got shape {a.shape}")
        if not np.allclose(a, a.T, rtol=0, atol=1e-14):
            raise ConfigError("diffusion matrix is not symmetric")
        if np.linalg.eigvalsh(a).min() < -1e-12:
            raise ConfigError("diffusion matrix is not positive semidefinite")
        object.__setattr__(self, "drift", b)
        object.__setattr__(self, "diffusion", a)

    @classmethod
    def zero(cls) -> GeneratorTriple:
        return cls(np.zeros(3), np.zeros((3, 3)))

    def compensated_drift(self) -> np.ndarray:
        if not self.levy.atoms:
            return self.drift.copy()
        return self.drift - self.levy.rates @ self.levy.coords

    def sigma(self) -> np.ndarray:
        """Symmetric square root of 2a."""
        ev, V = np.linalg.eigh(2.0 * self.diffusion)
        return (V * np.sqrt(np.clip(ev, 0.0, None))) @ V.T


@dataclass(frozen=True)
class PathSample:
    times: np.ndarray
    states: list
    seed: int


@dataclass(frozen=True)
class PathEnsemble:
    times: np.ndarray  # (R,)
    a: np.ndarray = field(repr=False)  # (R, P)
    b: np.ndarray = field(repr=False)
    seed: int = 0
    start: str = "identity"
    steps: int = 0
    substeps: int = 1

    @property
    def n_paths(self) -> int:
        return self.a.shape[1]

    def path(self, i: int) -> PathSample:
        states = [GroupElement(x, y) for x, y in zip(self.a[:, i], self.b[:, i])]
        return PathSample(self.times.copy(), states, self.seed)

    def __iter__(self):
        return (self.path(i) for i in range(self.n_paths))


def path_rng(seed: int, path_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(path_index,))))


def _draw_jumps(rng, total_rate, cum_p, t_end, dt, n_steps):
    times = []
    t = rng.exponential(1.0 / total_rate)
    while t < t_end:
        times.append(t)
        t += rng.exponential(1.0 / total_rate)
    times = np.array(times)
    atoms = np.searchsorted(cum_p, rng.random(times.size), side="right").astype(np.int32)
    steps = np.minimum((times / dt).astype(np.int64), n_steps - 1)
    return steps, times, atoms


def simulate(gen: GeneratorTriple, t_end: float, steps: int, n_paths: int, seed: int = 0,
             start: str = "identity", record_every: int = 1) -> PathEnsemble:
    """Simulate ``n_paths`` independent paths on [0, t_end] with ``steps`` Euler steps.

    Steps are subdivided when total_rate * dt would exceed the jump-rate cap;
    states are recorded every ``record_every`` (user) steps.
    """
    if not t_end > 0:
        raise ConfigError("t_end must be positive")
    if steps < 1 or n_paths < 1:
        raise ConfigError("steps and n_paths must be positive")
    if start not in ("identity", "haar_K"):
        raise ConfigError(f"unknown start {start!r}")
    if record_every < 1 or steps % record_every:
        raise ConfigError("record_every must divide steps")
    dt_user = t_end / steps
    total_rate = gen.levy.total_rate
    substeps = max(1, math.ceil(total_rate * dt_user / MAX_JUMP_RATE_DT - 1e-12))
    n_int = steps * substeps
    dt = t_end / n_int
    stride = record_every * substeps

    bc = gen.compensated_drift()
    sigma = gen.sigma()
    noisy = bool(np.any(sigma != 0))
    if total_rate > 0:
        atom_a = np.array([g.a for g, _ in gen.levy.atoms], dtype=complex)
        atom_b = np.array([g.b for g, _ in gen.levy.atoms], dtype=complex)
        cum_p = np.cumsum(gen.levy.rates) / total_rate
        cum_p[-1] = 1.0
    else:
        atom_a = np.zeros(1, dtype=complex)
        atom_b = np.zeros(1, dtype=complex)

    R = n_int // stride + 1
    out_a = np.empty((R, n_paths), dtype=complex)
    out_b = np.empty((R, n_paths), dtype=complex)
    for lo in range(0, n_paths, BLOCK_PATHS):
        hi = min(n_paths, lo + BLOCK_PATHS)
        P = hi - lo
        a0 = np.ones(P, dtype=complex)
        b0 = np.zeros(P, dtype=complex)
        incr = np.empty((n_int, P, 3)) if noisy else (bc * dt).reshape(1, 1, 3).copy()
        ev = []
        for p in range(P):
            rng = path_rng(seed, lo + p)
            if start == "haar_K":
                a0[p] = np.exp(1j * rng.uniform(0.0, 2 * np.pi))
            if total_rate > 0:
                ks, ts, qs = _draw_jumps(rng, total_rate, cum_p, t_end, dt, n_int)
                ev.append((np.full(ks.size, p, dtype=np.int64), ks, ts, qs))
            if noisy:
                xi = rng.standard_normal((n_int, 3))
                incr[:, p, :] = bc * dt + math.sqrt(dt) * xi @ sigma.T
        if ev:
            ev_path, ev_step, ev_time, ev_atom = (np.concatenate(c) for c in zip(*ev))
            order = np.lexsort((ev_time, ev_step))
            ev_path, ev_step, ev_atom = ev_path[order], ev_step[order], ev_atom[order]
        else:
            ev_path = np.zeros(0, dtype=np.int64)
            ev_step = np.zeros(0, dtype=np.int64)
            ev_atom = np.zeros(0, dtype=np.int32)
        ra, rb = _kernels.evolve_paths(
            a0, b0, np.ascontiguousarray(incr), not noisy,
            np.ascontiguousarray(ev_path, dtype=np.int64), np.ascontiguousarray(ev_step, dtype=np.int64),
            np.ascontiguousarray(ev_atom, dtype=np.int32), atom_a, atom_b, n_int, stride, RENORM_EVERY,
        )
        out_a[:, lo:hi] = ra
        out_b[:, lo:hi] = rb
    times = np.arange(R) * (stride * dt)
    return PathEnsemble(times, out_a, out_b, int(seed), start, int(steps), int(substeps))


def marginal(ens: PathEnsemble, t_query: float) -> Measure:
    """Sample of states at the last recorded time <= t_query."""
    tol = 1e-9 * max(1.0, ens.times[-1])
    if t_query < -tol or t_query > ens.times[-1] + tol:
        raise OutOfRange(f"t = {t_query} outside the simulated range [0, {ens.times[-1]}]")
    k = int(np.searchsorted(ens.times, t_query + tol, side="right")) - 1
    return Measure.empirical(a=ens.a[k], b=ens.b[k], invariantised=(ens.start == "haar_K"))


def paths_to_csv(ens: PathEnsemble) -> str:
    buf = io.StringIO()
    buf.write("path_id,t,re_a,im_a,re_b,im_b\n")
    for p in range(ens.n_paths):
        for k, t in enumerate(ens.times):
            x, y = ens.a[k, p], ens.b[k, p]
            buf.write("%d,%.17g,%.17g,%.17g,%.17g,%.17g\n" % (p, t, x.real, x.imag, y.real, y.imag))
    return buf.getvalue()
