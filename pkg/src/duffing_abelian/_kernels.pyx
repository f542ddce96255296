# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Dormand-Prince stepping of the Picard-Fuchs system
along a curve piece, and batched winding accumulation.

Mirrors ``_fallback.py`` operation for operation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, atan2, fabs, pow, cos, sin, hypot

cnp.import_array()

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561
cdef double A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247
cdef double A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192
cdef double B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920
cdef double E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline void rhs(int kind, double complex z0, double complex z1, double rho,
                     double th0, double th1, double t, double complex y0,
                     double complex y1, double complex* d0,
                     double complex* d1) nogil:
    cdef double complex h, dh, e, q
    cdef double ang
    if kind == 0:
        dh = z1 - z0
        h = z0 + t * dh
    else:
        ang = th0 + t * (th1 - th0)
        e = cos(ang) + 1j * sin(ang)
        h = z0 + rho * e
        dh = 1j * (th1 - th0) * rho * e
    q = 4.0 * h + 1.0
    d0[0] = ((12.0 * h + 4.0) * y0 - 5.0 * y1) / (4.0 * h * q) * dh
    d1[0] = (5.0 * y1 - y0) / q * dh


def step_piece(int kind, double complex z0, double complex z1, double rho,
               double th0, double th1, double complex y0, double complex y1,
               double rtol, double atol, long max_steps, double dt):
    cdef double t = 0.0, err, s0, s1, fac, last
    cdef double complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, k5a, k5b
    cdef double complex k6a, k6b, k7a, k7b, a0, a1, n0, n1, e0, e1
    cdef long n = 0
    cdef bint final
    if dt <= 0.0:
        dt = 0.01
    if dt > 1.0:
        dt = 1.0
    last = dt
    rhs(kind, z0, z1, rho, th0, th1, t, y0, y1, &k1a, &k1b)
    while t < 1.0:
        if n >= max_steps:
            return y0, y1, last, n, 1
        if dt < 1e-15 * (t if t > 1.0 else 1.0):
            return y0, y1, last, n, 2
        final = t + dt >= 1.0
        if final:
            dt = 1.0 - t
        n += 1
        a0 = y0 + dt * A21 * k1a
        a1 = y1 + dt * A21 * k1b
        rhs(kind, z0, z1, rho, th0, th1, t + C2 * dt, a0, a1, &k2a, &k2b)
        a0 = y0 + dt * (A31 * k1a + A32 * k2a)
        a1 = y1 + dt * (A31 * k1b + A32 * k2b)
        rhs(kind, z0, z1, rho, th0, th1, t + C3 * dt, a0, a1, &k3a, &k3b)
        a0 = y0 + dt * (A41 * k1a + A42 * k2a + A43 * k3a)
        a1 = y1 + dt * (A41 * k1b + A42 * k2b + A43 * k3b)
        rhs(kind, z0, z1, rho, th0, th1, t + C4 * dt, a0, a1, &k4a, &k4b)
        a0 = y0 + dt * (A51 * k1a + A52 * k2a + A53 * k3a + A54 * k4a)
        a1 = y1 + dt * (A51 * k1b + A52 * k2b + A53 * k3b + A54 * k4b)
        rhs(kind, z0, z1, rho, th0, th1, t + C5 * dt, a0, a1, &k5a, &k5b)
        a0 = y0 + dt * (A61 * k1a + A62 * k2a + A63 * k3a + A64 * k4a
                        + A65 * k5a)
        a1 = y1 + dt * (A61 * k1b + A62 * k2b + A63 * k3b + A64 * k4b
                        + A65 * k5b)
        rhs(kind, z0, z1, rho, th0, th1, t + dt, a0, a1, &k6a, &k6b)
        n0 = y0 + dt * (B1 * k1a + B3 * k3a + B4 * k4a + B5 * k5a + B6 * k6a)
        n1 = y1 + dt * (B1 * k1b + B3 * k3b + B4 * k4b + B5 * k5b + B6 * k6b)
        rhs(kind, z0, z1, rho, th0, th1, t + dt, n0, n1, &k7a, &k7b)
        e0 = dt * (E1 * k1a + E3 * k3a + E4 * k4a + E5 * k5a + E6 * k6a
                   + E7 * k7a)
        e1 = dt * (E1 * k1b + E3 * k3b + E4 * k4b + E5 * k5b + E6 * k6b
                   + E7 * k7b)
        s0 = atol + rtol * max(cabs_(y0), cabs_(n0))
        s1 = atol + rtol * max(cabs_(y1), cabs_(n1))
        err = sqrt(0.5 * ((cabs_(e0) / s0) ** 2 + (cabs_(e1) / s1) ** 2))
        if err <= 1.0:
            t = 1.0 if final else t + dt
            y0 = n0
            y1 = n1
            k1a = k7a
            k1b = k7b
            last = dt
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
            dt *= fac
        else:
            dt *= max(0.2, 0.9 * pow(err, -0.2))
    return y0, y1, last, n, 0


def winding_batch(i0, i2, i4, lam):
    cdef double complex[::1] a = np.ascontiguousarray(i0, dtype=np.complex128)
    cdef double complex[::1] b = np.ascontiguousarray(i2, dtype=np.complex128)
    cdef double complex[::1] c = np.ascontiguousarray(i4, dtype=np.complex128)
    cdef double[:, ::1] L = np.ascontiguousarray(np.atleast_2d(lam), dtype=np.float64)
    # moduli are shared by every parameter row
    cdef double[::1] aa = np.abs(np.asarray(a)), ab = np.abs(np.asarray(b)), ac = np.abs(np.asarray(c))
    cdef Py_ssize_t n = a.shape[0], m = L.shape[0], j, k
    out_total = np.empty(m)
    out_max = np.empty(m)
    out_min = np.empty(m)
    cdef double[::1] tot = out_total, mx = out_max, mn = out_min
    cdef double l0, l2, l4, acc, big, small, st, ratio, re, im
    cdef double complex prev, cur
    with nogil:
        for k in range(m):
            l0 = L[k, 0]
            l2 = L[k, 1]
            l4 = L[k, 2]
            prev = l0 * a[n - 1] + l2 * b[n - 1] + l4 * c[n - 1]
            acc = 0.0
            big = 0.0
            small = 1e308
            for j in range(n):
                cur = l0 * a[j] + l2 * b[j] + l4 * c[j]
                re = cur.real * prev.real + cur.imag * prev.imag
                im = cur.imag * prev.real - cur.real * prev.imag
                st = atan2(im, re)
                acc = acc + st
                if fabs(st) > big:
                    big = fabs(st)
                ratio = hypot(cur.real, cur.imag) / (fabs(l0) * aa[j] + fabs(l2) * ab[j]
                                                     + fabs(l4) * ac[j])
                if ratio < small:
                    small = ratio
                prev = cur
            tot[k] = acc
            mx[k] = big
            mn[k] = small
    return out_total, out_max, out_min
