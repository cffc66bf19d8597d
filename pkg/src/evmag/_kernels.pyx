# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled event-emission kernel; contract mirrors _kernels_py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, floor, rint

BACKEND_NAME = "native"

cdef double _CROSS_EPS = 1e-9


def interval_events(double[::1] l_ref, double[::1] l_a, double[::1] l_b,
                    long long ta, long long tb, double c, long width):
    """Emit threshold-crossing events for one inter-frame interval.

    See _kernels_py.interval_events for the full contract.
    """
    cdef Py_ssize_t npix = l_ref.shape[0]
    cdef Py_ssize_t u, i
    cdef long long total = 0
    cdef double d
    cdef long long cnt

    for u in range(npix):
        d = l_b[u] - l_ref[u]
        total += <long long>floor(fabs(d) / c + _CROSS_EPS)

    xs = np.empty(total, dtype=np.int64)
    ys = np.empty(total, dtype=np.int64)
    ts = np.empty(total, dtype=np.int64)
    ps = np.empty(total, dtype=np.int8)
    cdef long long[::1] xv = xs
    cdef long long[::1] yv = ys
    cdef long long[::1] tv = ts
    cdef signed char[::1] pv = ps

    cdef long long k = 0
    cdef long long m
    cdef double sgn, level, frac, tev
    cdef double span = <double>(tb - ta)

    for u in range(npix):
        d = l_b[u] - l_ref[u]
        cnt = <long long>floor(fabs(d) / c + _CROSS_EPS)
        if cnt == 0:
            continue
        sgn = 1.0 if d > 0 else -1.0
        for m in range(1, cnt + 1):
            level = l_ref[u] + sgn * m * c
            frac = (level - l_a[u]) / (l_b[u] - l_a[u])
            # rint matches np.rint (round half to even) for backend parity
            tev = rint(ta + span * frac)
            tv[k] = <long long>tev
            if tv[k] < ta:
                tv[k] = ta
            elif tv[k] > tb:
                tv[k] = tb
            xv[k] = u % width
            yv[k] = u // width
            pv[k] = <signed char>sgn
            k += 1
        l_ref[u] += sgn * cnt * c

    return xs, ys, ts, ps
