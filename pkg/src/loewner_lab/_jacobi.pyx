# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic Jacobi sweeps for complex Hermitian matrices.

Mirrors ``loewner_lab._jacobi_py.jacobi_sweeps`` rotation for rotation.
"""
from libc.math cimport sqrt, fabs, hypot


cdef double _off_norm(double complex[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = a[i, j]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


cdef void _rotate(double complex[:, ::1] a, double complex[:, ::1] v,
                  Py_ssize_t n, Py_ssize_t p, Py_ssize_t q) noexcept nogil:
    cdef double complex apq = a[p, q]
    cdef double mag = hypot(apq.real, apq.imag)
    cdef double app, aqq, theta, t, c, s
    cdef double complex wbar, g10, g11, xp, xq
    cdef Py_ssize_t k

    if mag == 0.0:
        return
    app = a[p, p].real
    aqq = a[q, q].real
    theta = (aqq - app) / (2.0 * mag)
    if fabs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / sqrt(t * t + 1.0)
    s = t * c
    wbar = (apq.real - 1j * apq.imag) / mag
    g10 = -s * wbar
    g11 = c * wbar

    for k in range(n):
        xp = a[k, p]
        xq = a[k, q]
        a[k, p] = c * xp + g10 * xq
        a[k, q] = s * xp + g11 * xq
    for k in range(n):
        if k != p and k != q:
            a[p, k] = a[k, p].real - 1j * a[k, p].imag
            a[q, k] = a[k, q].real - 1j * a[k, q].imag
    a[p, p] = app - t * mag
    a[q, q] = aqq + t * mag
    a[p, q] = 0.0
    a[q, p] = 0.0

    for k in range(n):
        xp = v[k, p]
        xq = v[k, q]
        v[k, p] = c * xp + g10 * xq
        v[k, q] = s * xp + g11 * xq


def jacobi_sweeps(double complex[:, ::1] a, double complex[:, ::1] v,
                  double threshold, int max_sweeps):
    """Diagonalize ``a`` in place, accumulating rotations into ``v``.

    Returns ``(sweeps, off_norm)``; the caller decides whether
    ``off_norm <= threshold`` means convergence.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q
    cdef int sweep = 0
    cdef double off
    with nogil:
        off = _off_norm(a, n)
        while off > threshold and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(a, v, n, p, q)
            sweep += 1
            off = _off_norm(a, n)
    return sweep, off
