# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled versions of the hot loops in ``_kernels_py``.

Complex products are spelled out in real arithmetic so the loops stay in C.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport pow

cnp.import_array()


cdef inline double _abs_pow(double re, double im, double k) noexcept nogil:
    cdef double m2 = re * re + im * im
    if k == 2.0:
        return m2
    if k == 1.0:
        return pow(m2, 0.5)
    return pow(m2, 0.5 * k)


def sandwich_batch(E, W, R):
    E = np.ascontiguousarray(E, dtype=np.complex128)
    W = np.ascontiguousarray(W, dtype=np.complex128)
    R = np.ascontiguousarray(R, dtype=np.complex128)
    cdef Py_ssize_t n = E.shape[0], m = W.shape[0], d = W.shape[1]
    if R.shape[0] != n or E.shape[1] != m or R.shape[1] != d:
        raise ValueError("shape mismatch in sandwich_batch")
    cdef const double[:, ::1] e = E.view(np.float64)
    cdef const double[:, ::1] w = W.view(np.float64)
    cdef const double[:, ::1] r = R.view(np.float64)
    out = np.empty(n, dtype=np.complex128)
    cdef double[::1] o = out.view(np.float64)
    cdef Py_ssize_t s, i, j
    cdef double ar, ai, rr, ri
    with nogil:
        for s in range(n):
            ar = 0.0
            ai = 0.0
            for i in range(m):
                rr = 0.0
                ri = 0.0
                for j in range(d):
                    rr = rr + w[i, 2 * j] * r[s, 2 * j] - w[i, 2 * j + 1] * r[s, 2 * j + 1]
                    ri = ri + w[i, 2 * j] * r[s, 2 * j + 1] + w[i, 2 * j + 1] * r[s, 2 * j]
                ar = ar + e[s, 2 * i] * rr - e[s, 2 * i + 1] * ri
                ai = ai + e[s, 2 * i] * ri + e[s, 2 * i + 1] * rr
            o[2 * s] = ar
            o[2 * s + 1] = ai
    return out


def born_batch(E, W, R, double k):
    amp = sandwich_batch(E, W, R)
    cdef const double[::1] a = amp.view(np.float64)
    cdef Py_ssize_t n = amp.shape[0], s
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for s in range(n):
            o[s] = _abs_pow(a[2 * s], a[2 * s + 1], k)
    return out


def choi_sum(mats, weights):
    M = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = M.shape[0], m = M.shape[1], d = M.shape[2]
    cdef Py_ssize_t big = m * d
    # v[t, i*m + a] = M[t, a, i]
    cdef const double[:, ::1] v = np.ascontiguousarray(
        M.transpose(0, 2, 1)).reshape(n, big).view(np.float64)
    out = np.zeros((big, big), dtype=np.complex128)
    cdef double[:, ::1] c = out.view(np.float64)
    cdef Py_ssize_t t, p, q
    cdef double xr, xi, yr, yi
    with nogil:
        for t in range(n):
            for p in range(big):
                xr = w[t] * v[t, 2 * p]
                xi = w[t] * v[t, 2 * p + 1]
                if xr == 0.0 and xi == 0.0:
                    continue
                for q in range(big):
                    yr = v[t, 2 * q]
                    yi = -v[t, 2 * q + 1]
                    c[p, 2 * q] = c[p, 2 * q] + xr * yr - xi * yi
                    c[p, 2 * q + 1] = c[p, 2 * q + 1] + xr * yi + xi * yr
    return out


def weighted_born_sum(S, ws, E, we, double k):
    S = np.ascontiguousarray(S, dtype=np.complex128)
    E = np.ascontiguousarray(E, dtype=np.complex128)
    cdef Py_ssize_t ni = S.shape[0], nj = E.shape[0]
    if ni == 0 or nj == 0:
        return 0.0
    cdef Py_ssize_t d = S.shape[1]
    if E.shape[1] != d:
        raise ValueError("shape mismatch in weighted_born_sum")
    cdef const double[:, ::1] s = S.view(np.float64)
    cdef const double[:, ::1] e = E.view(np.float64)
    cdef const double[::1] a = np.ascontiguousarray(ws, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(we, dtype=np.float64)
    cdef Py_ssize_t i, j, q
    cdef double total = 0.0, row, zr, zi
    with nogil:
        for j in range(nj):
            row = 0.0
            for i in range(ni):
                zr = 0.0
                zi = 0.0
                for q in range(d):
                    zr = zr + e[j, 2 * q] * s[i, 2 * q] - e[j, 2 * q + 1] * s[i, 2 * q + 1]
                    zi = zi + e[j, 2 * q] * s[i, 2 * q + 1] + e[j, 2 * q + 1] * s[i, 2 * q]
                row = row + a[i] * _abs_pow(zr, zi, k)
            total = total + b[j] * row
    return total
