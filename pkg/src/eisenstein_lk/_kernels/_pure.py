"""numpy implementations of the compiled kernels (same signatures and results)."""

from __future__ import annotations

import numpy as np

from ..group import exp_alg_arrays, mul_arrays

CHUNK = 2048


def accumulate_modes(a, b, w, lam, N, L):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    w = np.asarray(w, dtype=float)
    theta = 2 * np.pi * np.arange(L) / L
    e = np.exp(1j * theta)
    out = np.zeros((2 * N + 1, L), dtype=complex)
    for lo in range(0, a.shape[0], CHUNK):
        sl = slice(lo, lo + CHUNK)
        x = e[None, :] * a[sl, None] - np.conj(e)[None, :] * np.conj(b[sl, None])
        mod = np.abs(x)
        amp = w[sl, None] * np.exp((-1.0 - 1j * lam) * np.log(mod))
        u = x / mod
        out[N] += amp.sum(axis=0)
        up = amp.copy()
        dn = amp.copy()
        for n in range(1, N + 1):
            up *= u
            dn *= np.conj(u)
            out[N + n] += up.sum(axis=0)
            out[N - n] += dn.sum(axis=0)
    return out


def evolve_paths(a0, b0, incr, const_incr, ev_path, ev_step, ev_atom, atom_a, atom_b,
                 n_steps, stride, renorm_every):
    a = np.array(a0, dtype=complex)
    b = np.array(b0, dtype=complex)
    R = n_steps // stride + 1
    out_a = np.empty((R, a.shape[0]), dtype=complex)
    out_b = np.empty_like(out_a)
    out_a[0], out_b[0] = a, b
    if const_incr:
        ca, cb = exp_alg_arrays(incr[0, 0])
    bounds = np.searchsorted(ev_step, np.arange(n_steps + 1))
    r = 1
    for k in range(n_steps):
        if const_incr:
            ea, eb = ca, cb
        else:
            ea, eb = exp_alg_arrays(incr[k])
        a, b = mul_arrays(a, b, ea, eb)
        for e in range(bounds[k], bounds[k + 1]):
            p, q = ev_path[e], ev_atom[e]
            a[p], b[p] = mul_arrays(a[p], b[p], atom_a[q], atom_b[q])
        if (k + 1) % renorm_every == 0 or k + 1 == n_steps:
            nrm = np.sqrt(np.abs(a) ** 2 - np.abs(b) ** 2)
            a /= nrm
            b /= nrm
        if (k + 1) % stride == 0:
            out_a[r], out_b[r] = a, b
            r += 1
    return out_a, out_b
