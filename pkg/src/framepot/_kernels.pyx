# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled p-frame energy, gradient and projected-gradient descent.

Mirrors ``_pykernels`` exactly; see that module for the reference semantics.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt, log, isnan, INFINITY

cnp.import_array()

cdef double TINY = 1e-300
cdef double MAX_STEP = 1e12

cdef enum:
    ST_CONVERGED = 0
    ST_MAX_ITERS = 1
    ST_LINE_SEARCH_FAILED = 2
    ST_NON_FINITE = 3

CONVERGED = ST_CONVERGED
MAX_ITERS = ST_MAX_ITERS
LINE_SEARCH_FAILED = ST_LINE_SEARCH_FAILED
NON_FINITE = ST_NON_FINITE


cdef inline double _dot(const double[:, ::1] x, Py_ssize_t i, Py_ssize_t j, Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t k
    for k in range(d):
        s += x[i, k] * x[j, k]
    return s


cdef double _energy(const double[:, ::1] x, double p, double eps) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    cdef double t, b, v, row, total = 0.0
    for i in range(n):
        row = 0.0
        for j in range(i + 1, n):
            t = _dot(x, i, j, d)
            if eps > 0.0:
                b = sqrt(t * t + eps * eps)
            else:
                b = fabs(t)
            v = pow(b, p)
            if v >= TINY:
                row += v
        total += row
    return 2.0 * total


cdef double _energy_grad(const double[:, ::1] x, double p, double eps, double zero_cut,
                         double cap, double[:, ::1] g) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j, k
    cdef double t, b, v, w, row, total = 0.0, scale = 2.0 * p
    for i in range(n):
        for k in range(d):
            g[i, k] = 0.0
    for i in range(n):
        row = 0.0
        for j in range(i + 1, n):
            t = _dot(x, i, j, d)
            if eps > 0.0:
                b = sqrt(t * t + eps * eps)
                w = pow(b, p - 2.0) * t
            else:
                b = fabs(t)
                if b < zero_cut:
                    w = 0.0
                else:
                    w = pow(b, p - 1.0)
                    if w > cap:
                        w = cap
                    if t < 0.0:
                        w = -w
            v = pow(b, p)
            if v >= TINY:
                row += v
            w *= scale
            for k in range(d):
                g[i, k] += w * x[j, k]
                g[j, k] += w * x[i, k]
        total += row
    return 2.0 * total


cdef inline double _to_objective(double e, double p, bint log_objective) noexcept nogil:
    if log_objective:
        if e > 0.0:
            return log(e) / p
        return -INFINITY
    return e


cdef inline bint _bad(double f) noexcept nogil:
    return isnan(f) or f == INFINITY


def energy(x, double p, double eps=0.0):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double e
    with nogil:
        e = _energy(xv, p, eps)
    return e


def energy_grad(x, double p, double eps=0.0, double zero_cut=1e-12, double cap=1e8):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    g = np.empty((xv.shape[0], xv.shape[1]), dtype=np.float64)
    cdef double[:, ::1] gv = g
    cdef double e
    with nogil:
        e = _energy_grad(xv, p, eps, zero_cut, cap, gv)
    return e, g


cdef void _normalize_rows(double[:, ::1] x) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, k
    cdef double s
    for i in range(n):
        s = 0.0
        for k in range(d):
            s += x[i, k] * x[i, k]
        s = sqrt(s)
        for k in range(d):
            x[i, k] /= s


def descend(x0, double p, double eps=0.0, Py_ssize_t max_iters=5000, double step_init=0.1,
            double beta=0.5, double c=1e-4, double grad_tol=1e-10, double zero_cut=1e-12,
            double cap=1e8, bint log_objective=False):
    x_arr = np.array(x0, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] x = x_arr
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, k, it = 0
    y_arr = np.empty_like(x_arr)
    g_arr = np.empty_like(x_arr)
    r_arr = np.empty_like(x_arr)
    cdef double[:, ::1] y = y_arr
    cdef double[:, ::1] g = g_arr
    cdef double[:, ::1] r = r_arr
    cdef double e, ey, f, fy, gn2, radial, a, step, gscale
    cdef int status = ST_MAX_ITERS
    cdef bint accepted

    with nogil:
        _normalize_rows(x)
        e = _energy_grad(x, p, eps, zero_cut, cap, g)
        f = _to_objective(e, p, log_objective)
        if _bad(f):
            status = ST_NON_FINITE
        else:
            step = step_init
            while it < max_iters:
                gscale = 1.0
                if log_objective:
                    gscale = 1.0 / (p * e) if e > 0.0 else 0.0
                gn2 = 0.0
                for i in range(n):
                    radial = 0.0
                    for k in range(d):
                        radial += g[i, k] * x[i, k]
                    for k in range(d):
                        r[i, k] = gscale * (g[i, k] - radial * x[i, k])
                        gn2 += r[i, k] * r[i, k]
                if sqrt(gn2) <= grad_tol:
                    status = ST_CONVERGED
                    break
                a = step
                accepted = False
                while a > 1e-20:
                    for i in range(n):
                        for k in range(d):
                            y[i, k] = x[i, k] - a * r[i, k]
                    _normalize_rows(y)
                    ey = _energy(y, p, eps)
                    fy = _to_objective(ey, p, log_objective)
                    if _bad(fy):
                        status = ST_NON_FINITE
                        break
                    if fy < f and fy <= f - c * a * gn2:
                        accepted = True
                        break
                    a *= beta
                if status == ST_NON_FINITE:
                    break
                if not accepted:
                    status = ST_LINE_SEARCH_FAILED
                    break
                x[:, :] = y
                e = _energy_grad(x, p, eps, zero_cut, cap, g)
                f = _to_objective(e, p, log_objective)
                step = a / beta
                if step > MAX_STEP:
                    step = MAX_STEP
                it += 1
    return x_arr, e, it, status
