# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled heat-bath sweep kernels (hot inner loop of the samplers).

Bit-compatible with the pure-Python fallback in _kernels_py.py.
"""

from libc.math cimport ceil

ctypedef unsigned long long u64_t

cdef double _INV53 = 1.0 / 9007199254740992.0


cdef inline u64_t _mix(u64_t z) nogil:
    z = z + <u64_t>0x9E3779B97F4A7C15ULL
    z ^= z >> 30
    z = z * <u64_t>0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z = z * <u64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64_t _u64(u64_t seed, u64_t stream, u64_t t, u64_t v) nogil:
    cdef u64_t x = _mix(seed)
    x = _mix(x ^ stream)
    x = _mix(x ^ t)
    x = _mix(x ^ v)
    return x


cdef inline double _u01(u64_t seed, u64_t stream, u64_t t, u64_t v) nogil:
    return <double>(_u64(seed, stream, t, v) >> 11) * _INV53


def u64(seed, stream, t, v):
    return int(_u64(<u64_t>(seed & 0xFFFFFFFFFFFFFFFF),
                    <u64_t>(stream & 0xFFFFFFFFFFFFFFFF),
                    <u64_t>(t & 0xFFFFFFFFFFFFFFFF),
                    <u64_t>(v & 0xFFFFFFFFFFFFFFFF)))


def u01(seed, stream, t, v):
    return (u64(seed, stream, t, v) >> 11) * _INV53


cdef inline long _pick(long lo, long hi, long step, double u) nogil:
    cdef long size = (hi - lo) // step + 1
    cdef long k = <long>ceil(u * size) - 1
    if k < 0:
        k = 0
    return lo + step * k


cdef long _sweep(long[::1] values, const int[:, ::1] nbrs, const unsigned char[::1] frozen,
                 const long[::1] clamp_lo, const long[::1] clamp_hi, int model_lip,
                 u64_t seed, u64_t stream, u64_t t) nogil:
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t deg = nbrs.shape[1]
    cdef Py_ssize_t v, j
    cdef long x, nmin, nmax, lo, hi, step
    for v in range(n):
        if frozen[v]:
            continue
        nmin = values[nbrs[v, 0]]
        nmax = nmin
        for j in range(1, deg):
            x = values[nbrs[v, j]]
            if x < nmin:
                nmin = x
            elif x > nmax:
                nmax = x
        if model_lip:
            lo = nmax - 1
            if clamp_lo[v] > lo:
                lo = clamp_lo[v]
            hi = nmin + 1
            if clamp_hi[v] < hi:
                hi = clamp_hi[v]
            step = 1
        else:
            lo = nmax - 1
            hi = nmin + 1
            step = 2
        if lo > hi:
            return v + 1
        values[v] = _pick(lo, hi, step, _u01(seed, stream, t, <u64_t>v))
    return 0


cdef long _sweep_pair(long[::1] lower, long[::1] upper, const int[:, ::1] nbrs,
                      const unsigned char[::1] frozen, const long[::1] clamp_lo,
                      const long[::1] clamp_hi, int model_lip,
                      u64_t seed, u64_t stream, u64_t t) nogil:
    cdef Py_ssize_t n = lower.shape[0]
    cdef Py_ssize_t deg = nbrs.shape[1]
    cdef Py_ssize_t v, j, side
    cdef long x, nmin, nmax, lo, hi, step
    cdef double u
    for v in range(n):
        if frozen[v]:
            continue
        u = _u01(seed, stream, t, <u64_t>v)
        for side in range(2):
            if side == 0:
                nmin = lower[nbrs[v, 0]]
            else:
                nmin = upper[nbrs[v, 0]]
            nmax = nmin
            for j in range(1, deg):
                if side == 0:
                    x = lower[nbrs[v, j]]
                else:
                    x = upper[nbrs[v, j]]
                if x < nmin:
                    nmin = x
                elif x > nmax:
                    nmax = x
            if model_lip:
                lo = nmax - 1
                if clamp_lo[v] > lo:
                    lo = clamp_lo[v]
                hi = nmin + 1
                if clamp_hi[v] < hi:
                    hi = clamp_hi[v]
                step = 1
            else:
                lo = nmax - 1
                hi = nmin + 1
                step = 2
            if lo > hi:
                return v + 1
            if side == 0:
                lower[v] = _pick(lo, hi, step, u)
            else:
                upper[v] = _pick(lo, hi, step, u)
    return 0


def sweep(long[::1] values, const int[:, ::1] nbrs, const unsigned char[::1] frozen,
          const long[::1] clamp_lo, const long[::1] clamp_hi, int model_lip,
          seed, stream, t):
    cdef u64_t s = <u64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef u64_t st = <u64_t>(stream & 0xFFFFFFFFFFFFFFFF)
    cdef u64_t tt = <u64_t>(t & 0xFFFFFFFFFFFFFFFF)
    cdef long rc
    with nogil:
        rc = _sweep(values, nbrs, frozen, clamp_lo, clamp_hi, model_lip,
                    s, st, tt)
    return rc


def sweep_pair(long[::1] lower, long[::1] upper, const int[:, ::1] nbrs,
               const unsigned char[::1] frozen, const long[::1] clamp_lo, const long[::1] clamp_hi,
               int model_lip, seed, stream, t):
    cdef u64_t s = <u64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef u64_t st = <u64_t>(stream & 0xFFFFFFFFFFFFFFFF)
    cdef u64_t tt = <u64_t>(t & 0xFFFFFFFFFFFFFFFF)
    cdef long rc
    with nogil:
        rc = _sweep_pair(lower, upper, nbrs, frozen, clamp_lo, clamp_hi,
                         model_lip, s, st, tt)
    return rc
