# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``mcbound._pykernels`` function for function."""

import numpy as np

from libc.math cimport sqrt, fabs

ctypedef double complex cplx


cdef inline double cabs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi(cplx* a, cplx* v, double* w, Py_ssize_t n, int max_sweeps) noexcept nogil:
    """In-place cyclic Jacobi on the n x n Hermitian ``a`` (row-major).

    On return ``w`` holds the unsorted diagonal and ``v`` the eigenvectors as
    columns. Returns the number of sweeps used, or -1 on non-convergence.
    """
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, fro, r, theta, t, c, s, app, aqq
    cdef cplx e, ec, x, y

    for p in range(n):
        for q in range(n):
            v[p * n + q] = 1.0 if p == q else 0.0
        a[p * n + p] = a[p * n + p].real

    fro = 0.0
    for p in range(n * n):
        fro += cabs2(a[p])
    fro = sqrt(fro)

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += cabs2(a[p * n + q])
        if off == 0.0 or sqrt(off) <= 1e-18 * fro:
            for p in range(n):
                w[p] = a[p * n + p].real
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n):
            for q in range(p + 1, n):
                r = sqrt(cabs2(a[p * n + q]))
                if r == 0.0:
                    continue
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                if sweep > 3 and fabs(app) + 1e2 * r == fabs(app) and fabs(aqq) + 1e2 * r == fabs(aqq):
                    a[p * n + q] = 0.0
                    a[q * n + p] = 0.0
                    continue
                e = a[p * n + q] / r
                ec = e.conjugate()
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = a[k * n + p]
                    y = a[k * n + q]
                    a[k * n + p] = c * x - s * ec * y
                    a[k * n + q] = s * e * x + c * y
                for k in range(n):
                    x = a[p * n + k]
                    y = a[q * n + k]
                    a[p * n + k] = c * x - s * e * y
                    a[q * n + k] = s * ec * x + c * y
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p] = app - t * r
                a[q * n + q] = aqq + t * r
                for k in range(n):
                    x = v[k * n + p]
                    y = v[k * n + q]
                    v[k * n + p] = c * x - s * ec * y
                    v[k * n + q] = s * e * x + c * y
    return -1


def jacobi_eigh(h, int max_sweeps=100):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v, sweeps)``; ``sweeps == -1`` signals non-convergence.
    """
    cdef cplx[:, ::1] a = np.array(h, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    v_arr = np.empty((n, n), dtype=np.complex128)
    w_arr = np.empty(n, dtype=np.float64)
    cdef cplx[:, ::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef int sweeps
    if n == 0:
        return w_arr, v_arr, 0
    with nogil:
        sweeps = _jacobi(&a[0, 0], &v[0, 0], &w[0], n, max_sweeps)
    order = np.argsort(-w_arr, kind="stable")
    return w_arr[order], v_arr[:, order], sweeps


cdef int _wootters_one(const cplx* rho, double* out) noexcept nogil:
    """Concurrence of one 4x4 operator. out = (C, min eig rho, min singular value, trace).

    With rho = X X^dag (X = V sqrt(w)), the Wootters lambdas are the singular
    values of tau = X^T (Y x Y) X. They are read off the Hermitian dilation
    [[0, tau], [tau^dag, 0]] so that rounding enters linearly rather than
    through a square root of near-zero eigenvalues.
    """
    cdef cplx a[16]
    cdef cplx vec[16]
    cdef cplx tau[16]
    cdef cplx big[64]
    cdef cplx bigvec[64]
    cdef double w[4]
    cdef double lam[8]
    cdef double sgn[4]
    cdef Py_ssize_t i, j, k
    cdef double mn, tr, l
    cdef cplx acc
    cdef int rc

    sgn[0] = -1.0
    sgn[1] = 1.0
    sgn[2] = 1.0
    sgn[3] = -1.0
    tr = 0.0
    for i in range(4):
        tr += rho[i * 4 + i].real
    for i in range(16):
        a[i] = rho[i]
    rc = _jacobi(a, vec, w, 4, 100)
    if rc < 0:
        return -1
    mn = w[0]
    for i in range(1, 4):
        if w[i] < mn:
            mn = w[i]
    for k in range(4):
        l = sqrt(w[k]) if w[k] > 0.0 else 0.0
        for i in range(4):
            vec[i * 4 + k] = vec[i * 4 + k] * l
    # tau[i, j] = sum_a X[a, i] s_a X[3 - a, j]
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                acc = acc + vec[k * 4 + i] * sgn[k] * vec[(3 - k) * 4 + j]
            tau[i * 4 + j] = acc
    for i in range(64):
        big[i] = 0.0
    for i in range(4):
        for j in range(4):
            big[i * 8 + 4 + j] = tau[i * 4 + j]
            big[(4 + j) * 8 + i] = tau[i * 4 + j].conjugate()
    rc = _jacobi(big, bigvec, lam, 8, 100)
    if rc < 0:
        return -1
    # descending insertion sort; the top four are the singular values
    for i in range(1, 8):
        l = lam[i]
        j = i - 1
        while j >= 0 and lam[j] < l:
            lam[j + 1] = lam[j]
            j -= 1
        lam[j + 1] = l
    out[2] = lam[3]
    for i in range(4):
        if lam[i] < 0.0:
            lam[i] = 0.0
    l = lam[0] - lam[1] - lam[2] - lam[3]
    out[0] = l if l > 0.0 else 0.0
    out[1] = mn
    out[3] = tr
    return 0


def wootters_batch(stack):
    """Wootters concurrence for a ``(m, 4, 4)`` stack.

    Returns an ``(m, 4)`` float array with columns
    ``(concurrence, min eigenvalue of rho, smallest lambda, trace)``.
    Raises ``ArithmeticError`` if an eigen-solve fails to converge.
    """
    cdef const cplx[:, :, ::1] s = np.ascontiguousarray(stack, dtype=np.complex128)
    cdef Py_ssize_t m = s.shape[0], i
    out_arr = np.zeros((m, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef int bad = 0
    if m == 0:
        return out_arr
    with nogil:
        for i in range(m):
            if _wootters_one(&s[i, 0, 0], &out[i, 0]) < 0:
                bad = 1
    if bad:
        raise ArithmeticError("Jacobi iteration did not converge in Wootters kernel")
    return out_arr


def swap_family_sums(psi, dims, masks):
    """For each party bitmask S: sum_{r,h} |a_r a_h - a_r' a_h'|^2.

    ``r'`` is ``r`` with the digits of parties in S taken from ``h`` (and
    ``h'`` the complementary exchange). Flat indices are row-major.
    """
    cdef const cplx[::1] a = np.ascontiguousarray(psi, dtype=np.complex128).ravel()
    dims = [int(d) for d in dims]
    cdef Py_ssize_t n_party = len(dims)
    cdef Py_ssize_t size = a.shape[0]
    mask_list = [int(m) for m in masks]
    cdef Py_ssize_t n_mask = len(mask_list)
    out_arr = np.zeros(n_mask, dtype=np.float64)
    cdef double[::1] out = out_arr
    proj_arr = np.zeros((n_mask, size), dtype=np.intp)
    flat = np.arange(size)
    strides = [1] * n_party
    for p in range(n_party - 2, -1, -1):
        strides[p] = strides[p + 1] * dims[p + 1]
    for mi, m in enumerate(mask_list):
        for p in range(n_party):
            if m >> p & 1:
                proj_arr[mi] += (flat // strides[p]) % dims[p] * strides[p]
    cdef Py_ssize_t[:, ::1] proj = proj_arr
    cdef Py_ssize_t mi2, r, h, rp, hp
    cdef double acc
    cdef cplx z
    with nogil:
        for mi2 in range(n_mask):
            acc = 0.0
            for r in range(size):
                for h in range(size):
                    rp = r - proj[mi2, r] + proj[mi2, h]
                    hp = h - proj[mi2, h] + proj[mi2, r]
                    z = a[r] * a[h] - a[rp] * a[hp]
                    acc += cabs2(z)
            out[mi2] = acc
    return out_arr
