# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``.

Singular values come from LAPACK ``zgesvd`` through scipy's Cython
bindings. Loops run without the GIL so restarts can overlap in threads.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs, M_PI
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zgesvd

cnp.import_array()


cdef struct Scratch:
    int rows
    int cols
    int lwork
    double complex* a
    double complex* work
    double* s
    double* rwork


cdef int scratch_init(Scratch* w, int d_a, int d_b) noexcept nogil:
    cdef int mn = d_a if d_a < d_b else d_b
    cdef int mx = d_a if d_a > d_b else d_b
    # row-major (d_a, d_b) is column-major (d_b, d_a)
    w.rows = d_b
    w.cols = d_a
    w.lwork = 4 * (2 * mn + mx) + 64
    w.a = <double complex*> malloc(d_a * d_b * sizeof(double complex))
    w.work = <double complex*> malloc(w.lwork * sizeof(double complex))
    w.s = <double*> malloc(mn * sizeof(double))
    w.rwork = <double*> malloc((5 * mn + 8) * sizeof(double))
    if w.a == NULL or w.work == NULL or w.s == NULL or w.rwork == NULL:
        return -1
    return 0


cdef void scratch_free(Scratch* w) noexcept nogil:
    free(w.a)
    free(w.work)
    free(w.s)
    free(w.rwork)


cdef double lapack_nuclear(const double complex* x, Scratch* w) noexcept nogil:
    cdef int n = w.rows * w.cols
    cdef int i, info = 0
    cdef int mn = w.rows if w.rows < w.cols else w.cols
    cdef int one = 1
    cdef double nuc = 0.0
    cdef char jobn = b'N'
    for i in range(n):
        w.a[i] = x[i]
    zgesvd(&jobn, &jobn, &w.rows, &w.cols, w.a, &w.rows, w.s,
           NULL, &one, NULL, &one, w.work, &w.lwork, w.rwork, &info)
    if info != 0:
        return 0.0 / 0.0
    for i in range(mn):
        nuc += w.s[i]
    return nuc


cdef double jacobi_nuclear(const double complex* x, Scratch* w) noexcept nogil:
    """Sum of singular values by one-sided (Hestenes) Jacobi.

    The matrix is held as ``ncol`` columns of length ``nrow`` with
    ``ncol <= nrow``; columns are rotated pairwise until mutually
    orthogonal, after which their norms are the singular values.
    Returns -1 if the sweeps do not converge.
    """
    cdef int nrow, ncol, i, p, q, sweep, rotated
    cdef double complex* a = w.a
    cdef double alpha, beta, absg, zeta, t, c, s, nuc = 0.0
    cdef double complex g, ph, ap, aq
    # row-major (d_a, d_b): element (i, j) at i * d_b + j
    if w.cols <= w.rows:
        # columns indexed by i (d_a of them), each of length d_b
        ncol = w.cols
        nrow = w.rows
        for i in range(ncol * nrow):
            a[i] = x[i]
    else:
        ncol = w.rows
        nrow = w.cols
        for p in range(ncol):
            for i in range(nrow):
                a[p * nrow + i] = x[i * ncol + p]
    for sweep in range(60):
        rotated = 0
        for p in range(ncol - 1):
            for q in range(p + 1, ncol):
                alpha = 0.0
                beta = 0.0
                g = 0.0
                for i in range(nrow):
                    ap = a[p * nrow + i]
                    aq = a[q * nrow + i]
                    alpha += ap.real * ap.real + ap.imag * ap.imag
                    beta += aq.real * aq.real + aq.imag * aq.imag
                    g = g + ap.conjugate() * aq
                absg = sqrt(g.real * g.real + g.imag * g.imag)
                if absg == 0.0 or absg <= 1e-15 * sqrt(alpha * beta):
                    continue
                rotated = 1
                ph = g / absg
                zeta = (beta - alpha) / (2.0 * absg)
                t = (1.0 if zeta >= 0.0 else -1.0) / (fabs(zeta) + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = c * t
                for i in range(nrow):
                    ap = a[p * nrow + i]
                    aq = a[q * nrow + i] * ph.conjugate()
                    a[p * nrow + i] = c * ap - s * aq
                    a[q * nrow + i] = (s * ap + c * aq) * ph
        if not rotated:
            for p in range(ncol):
                alpha = 0.0
                for i in range(nrow):
                    ap = a[p * nrow + i]
                    alpha += ap.real * ap.real + ap.imag * ap.imag
                nuc += sqrt(alpha)
            return nuc
    return -1.0


cdef double score(const double complex* x, Scratch* w) noexcept nogil:
    """(sum of singular values)^2 - |x|^2; NaN if the SVD fails."""
    cdef int n = w.rows * w.cols
    cdef int i
    cdef double nrm = 0.0, nuc
    for i in range(n):
        nrm += x[i].real * x[i].real + x[i].imag * x[i].imag
    if nrm == 0.0:
        return 0.0
    nuc = jacobi_nuclear(x, w)
    if nuc < 0.0:
        nuc = lapack_nuclear(x, w)
    return nuc * nuc - nrm


def member_scores(members, int d_a, int d_b):
    cdef double complex[:, ::1] mem = np.ascontiguousarray(members, dtype=np.complex128)
    cdef Py_ssize_t m = mem.shape[0], k
    out = np.zeros(m)
    cdef double[::1] o = out
    cdef Scratch w
    if m == 0:
        return out
    if mem.shape[1] != d_a * d_b:
        raise ValueError("member length does not match d_a * d_b")
    with nogil:
        if scratch_init(&w, d_a, d_b) != 0:
            scratch_free(&w)
            with gil:
                raise MemoryError()
        for k in range(m):
            o[k] = score(&mem[k, 0], &w)
        scratch_free(&w)
    return out


cdef inline void rotate(const double complex* xa, const double complex* xb,
                        double complex* outa, double complex* outb, Py_ssize_t n,
                        double theta, double complex e) noexcept nogil:
    cdef double c = cos(theta), s = sin(theta)
    cdef Py_ssize_t i
    cdef double complex se = s * e, sec = -s * e.conjugate()
    for i in range(n):
        outa[i] = c * xa[i] + se * xb[i]
        outb[i] = sec * xa[i] + c * xb[i]


def coordinate_sweep(cnp.ndarray members, int d_a, int d_b, double sign,
                     double step, cnp.ndarray scores):
    if members.dtype != np.complex128 or not members.flags.c_contiguous:
        raise TypeError("members must be a C-contiguous complex128 array")
    if scores.dtype != np.float64 or not scores.flags.c_contiguous:
        raise TypeError("scores must be a C-contiguous float64 array")
    cdef double complex[:, ::1] mem = members
    cdef double[::1] sc = scores
    cdef Py_ssize_t m = mem.shape[0], n = mem.shape[1]
    cdef Py_ssize_t a, b, i
    cdef int ph, k, ncand, best, err = 0, accepted = 0
    cdef double complex e
    cdef double g0, gp, gm, curv, th, gain, best_gain
    cdef double sa[3]
    cdef double sb[3]
    cdef double complex* buf
    cdef Scratch w
    if n != d_a * d_b:
        raise ValueError("member length does not match d_a * d_b")

    with nogil:
        err = scratch_init(&w, d_a, d_b)
        # three candidate pairs (a, b) side by side
        buf = <double complex*> malloc(6 * n * sizeof(double complex))
        if buf == NULL or err != 0:
            free(buf)
            scratch_free(&w)
            with gil:
                raise MemoryError()
        for a in range(m - 1):
            for b in range(a + 1, m):
                for ph in range(2):
                    e = 1.0 if ph == 0 else 1j
                    g0 = sign * (sc[a] + sc[b])
                    rotate(&mem[a, 0], &mem[b, 0], buf, buf + n, n, step, e)
                    rotate(&mem[a, 0], &mem[b, 0], buf + 2 * n, buf + 3 * n, n, -step, e)
                    sa[0] = score(buf, &w)
                    sb[0] = score(buf + n, &w)
                    sa[1] = score(buf + 2 * n, &w)
                    sb[1] = score(buf + 3 * n, &w)
                    ncand = 2
                    gp = sign * (sa[0] + sb[0])
                    gm = sign * (sa[1] + sb[1])
                    curv = gp - 2.0 * g0 + gm
                    if curv < 0.0:
                        th = step * (gm - gp) / (2.0 * curv)
                        if th > 0.5 * M_PI:
                            th = 0.5 * M_PI
                        elif th < -0.5 * M_PI:
                            th = -0.5 * M_PI
                        if fabs(fabs(th) - step) > 1e-3 * step and th != 0.0:
                            rotate(&mem[a, 0], &mem[b, 0], buf + 4 * n, buf + 5 * n, n, th, e)
                            sa[2] = score(buf + 4 * n, &w)
                            sb[2] = score(buf + 5 * n, &w)
                            ncand = 3
                    best = -1
                    best_gain = 1e-15
                    for k in range(ncand):
                        gain = sign * (sa[k] + sb[k]) - g0
                        if gain > best_gain:
                            best_gain = gain
                            best = k
                    if best >= 0:
                        for i in range(n):
                            mem[a, i] = buf[2 * best * n + i]
                            mem[b, i] = buf[(2 * best + 1) * n + i]
                        sc[a] = sa[best]
                        sc[b] = sb[best]
                        accepted += 1
        free(buf)
        scratch_free(&w)
    return accepted


def bound_batch(p, q):
    cdef double[:, ::1] sp = np.sqrt(np.atleast_2d(np.asarray(p, dtype=np.float64))).copy()
    cdef double[:, ::1] sq = np.sqrt(np.atleast_2d(np.asarray(q, dtype=np.float64))).copy()
    cdef Py_ssize_t nrow = sp.shape[0], d = sp.shape[1]
    cdef Py_ssize_t r, k, j, jp
    cdef double acc, inner
    out = np.zeros(nrow)
    cdef double[::1] o = out
    if sq.shape[0] != nrow or sq.shape[1] != d:
        raise ValueError("p and q must have the same shape")
    with nogil:
        for r in range(nrow):
            acc = 0.0
            for k in range(d):
                for j in range(d - 1):
                    inner = 0.0
                    for jp in range(j + 1, d):
                        inner += sp[r, jp] * sq[r, (jp + k) % d]
                    acc += sp[r, j] * sq[r, (j + k) % d] * inner
            o[r] = 2.0 * acc / (d - 1)
    return out
