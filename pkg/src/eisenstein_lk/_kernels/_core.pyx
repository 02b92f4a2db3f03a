# cython: language_level=3
"""Compiled hot loops: quadrature-mode accumulation and Euler path evolution."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cosh, sinh, cos, sin, log, fabs

cnp.import_array()

cdef double SQRT2 = sqrt(2.0)
cdef double DELTA_SERIES = 1e-3


def accumulate_modes(double complex[::1] a, double complex[::1] b, double[::1] w,
                     double lam, Py_ssize_t N, Py_ssize_t L):
    """Return G[n + N, j] = sum_k w_k |x_kj|^(-1 - i lam) u_kj^n for n in [-N, N].

    x_kj = e^{i theta_j} a_k - e^{-i theta_j} conj(b_k) and u_kj = x_kj / |x_kj|,
    theta_j = 2 pi j / L.
    """
    cdef Py_ssize_t M = a.shape[0]
    cdef Py_ssize_t k, j, n
    out = np.zeros((2 * N + 1, L), dtype=np.complex128)
    cdef double complex[:, ::1] G = out
    cdef double[::1] ct = np.cos(2 * np.pi * np.arange(L) / L)
    cdef double[::1] st = np.sin(2 * np.pi * np.arange(L) / L)
    # per-node accumulators, contiguous in n, written to column j of G once
    cdef double[::1] acc_r = np.zeros(2 * N + 1)
    cdef double[::1] acc_i = np.zeros(2 * N + 1)
    cdef double[::1] xa_r = np.empty(M)
    cdef double[::1] xa_i = np.empty(M)
    cdef double[::1] xb_r = np.empty(M)
    cdef double[::1] xb_i = np.empty(M)
    cdef double c, s, xr, xi, mod, lmod, amp_r, amp_i, ur, ui, pr, pi_, tmp, cr, ci
    cdef bint phase = lam != 0.0
    for k in range(M):
        xa_r[k] = a[k].real
        xa_i[k] = a[k].imag
        xb_r[k] = b[k].real
        xb_i[k] = b[k].imag
    with nogil:
        for j in range(L):
            c = ct[j]
            s = st[j]
            for n in range(2 * N + 1):
                acc_r[n] = 0.0
                acc_i[n] = 0.0
            for k in range(M):
                # e^{i t} a - e^{-i t} conj(b)
                xr = c * (xa_r[k] - xb_r[k]) - s * (xa_i[k] - xb_i[k])
                xi = c * (xa_i[k] + xb_i[k]) + s * (xa_r[k] + xb_r[k])
                mod = sqrt(xr * xr + xi * xi)
                tmp = w[k] / mod
                if phase:
                    lmod = lam * log(mod)
                    amp_r = tmp * cos(lmod)
                    amp_i = -tmp * sin(lmod)
                else:
                    amp_r = tmp
                    amp_i = 0.0
                ur = xr / mod
                ui = xi / mod
                acc_r[N] += amp_r
                acc_i[N] += amp_i
                pr = amp_r
                pi_ = amp_i
                cr = amp_r
                ci = amp_i
                for n in range(1, N + 1):
                    tmp = pr * ur - pi_ * ui
                    pi_ = pr * ui + pi_ * ur
                    pr = tmp
                    tmp = cr * ur + ci * ui
                    ci = ci * ur - cr * ui
                    cr = tmp
                    acc_r[N + n] += pr
                    acc_i[N + n] += pi_
                    acc_r[N - n] += cr
                    acc_i[N - n] += ci
            for n in range(2 * N + 1):
                G[n, j] = acc_r[n] + 1j * acc_i[n]
    return out


cdef inline void _exp_alg(double c1, double c2, double c3,
                          double *ar, double *ai, double *br, double *bi) noexcept nogil:
    cdef double d = 0.5 * (c1 * c1 + c2 * c2) - c3 * c3
    cdef double ch, shc, s
    if fabs(d) < DELTA_SERIES:
        ch = 1 + d / 2 * (1 + d / 12 * (1 + d / 30 * (1 + d / 56)))
        shc = 1 + d / 6 * (1 + d / 20 * (1 + d / 42 * (1 + d / 72)))
    elif d > 0:
        s = sqrt(d)
        ch = cosh(s)
        shc = sinh(s) / s
    else:
        s = sqrt(-d)
        ch = cos(s)
        shc = sin(s) / s
    ar[0] = ch
    ai[0] = c3 * shc
    br[0] = c1 / SQRT2 * shc
    bi[0] = c2 / SQRT2 * shc


cdef inline void _mul(double *ar, double *ai, double *br, double *bi,
                      double har, double hai, double hbr, double hbi) noexcept nogil:
    # (a, b) * (ha, hb) = (a ha + b conj(hb), a hb + b conj(ha))
    cdef double nar = ar[0] * har - ai[0] * hai + br[0] * hbr + bi[0] * hbi
    cdef double nai = ar[0] * hai + ai[0] * har + bi[0] * hbr - br[0] * hbi
    cdef double nbr = ar[0] * hbr - ai[0] * hbi + br[0] * har + bi[0] * hai
    cdef double nbi = ar[0] * hbi + ai[0] * hbr + bi[0] * har - br[0] * hai
    ar[0] = nar
    ai[0] = nai
    br[0] = nbr
    bi[0] = nbi


def evolve_paths(double complex[::1] a0, double complex[::1] b0,
                 double[:, :, ::1] incr, bint const_incr,
                 cnp.int64_t[::1] ev_path, cnp.int64_t[::1] ev_step, cnp.int32_t[::1] ev_atom,
                 double complex[::1] atom_a, double complex[::1] atom_b,
                 Py_ssize_t n_steps, Py_ssize_t stride, Py_ssize_t renorm_every):
    """Advance P paths through n_steps right-multiplications.

    incr has shape (n_steps, P, 3), or (1, 1, 3) when const_incr is set (deterministic
    drift).  Jump events are sorted by (step, time) and applied at the end of their
    step.  States are recorded every ``stride`` steps, starting with the initial state.
    """
    cdef Py_ssize_t P = a0.shape[0]
    cdef Py_ssize_t R = n_steps // stride + 1
    out_a = np.empty((R, P), dtype=np.complex128)
    out_b = np.empty((R, P), dtype=np.complex128)
    cdef double complex[:, ::1] oa = out_a
    cdef double complex[:, ::1] ob = out_b
    cdef double[::1] sar = np.array([z.real for z in a0], dtype=float)
    cdef double[::1] sai = np.array([z.imag for z in a0], dtype=float)
    cdef double[::1] sbr = np.array([z.real for z in b0], dtype=float)
    cdef double[::1] sbi = np.array([z.imag for z in b0], dtype=float)
    cdef Py_ssize_t n_ev = ev_path.shape[0]
    cdef Py_ssize_t e = 0
    cdef Py_ssize_t k, p, r, q
    cdef double ear, eai, ebr, ebi, nrm
    cdef double car = 0, cai = 0, cbr = 0, cbi = 0
    for p in range(P):
        oa[0, p] = a0[p]
        ob[0, p] = b0[p]
    if const_incr:
        _exp_alg(incr[0, 0, 0], incr[0, 0, 1], incr[0, 0, 2], &car, &cai, &cbr, &cbi)
    r = 1
    with nogil:
        for k in range(n_steps):
            for p in range(P):
                if const_incr:
                    ear = car
                    eai = cai
                    ebr = cbr
                    ebi = cbi
                else:
                    _exp_alg(incr[k, p, 0], incr[k, p, 1], incr[k, p, 2], &ear, &eai, &ebr, &ebi)
                _mul(&sar[p], &sai[p], &sbr[p], &sbi[p], ear, eai, ebr, ebi)
            while e < n_ev and ev_step[e] == k:
                p = ev_path[e]
                q = ev_atom[e]
                _mul(&sar[p], &sai[p], &sbr[p], &sbi[p],
                     atom_a[q].real, atom_a[q].imag, atom_b[q].real, atom_b[q].imag)
                e += 1
            if (k + 1) % renorm_every == 0 or k + 1 == n_steps:
                for p in range(P):
                    nrm = sqrt(sar[p] * sar[p] + sai[p] * sai[p] - sbr[p] * sbr[p] - sbi[p] * sbi[p])
                    sar[p] /= nrm
                    sai[p] /= nrm
                    sbr[p] /= nrm
                    sbi[p] /= nrm
            if (k + 1) % stride == 0:
                for p in range(P):
                    oa[r, p] = sar[p] + 1j * sai[p]
                    ob[r, p] = sbr[p] + 1j * sbi[p]
                r += 1
    return out_a, out_b
