"""Pure-Python heat-bath sweep kernels.

Reference implementation of the compiled extension in _kernels.pyx; both
must produce bit-identical results for the same inputs (the test suite
compares them).  The counter-based generator makes the variate at
(seed, stream, time, vertex) independent of execution history, which is
what lets coupling-from-the-past reuse randomness across epochs.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0  # 2^-53


def _mix(z: int) -> int:
    z = (z + _GOLDEN) & _MASK
    z ^= z >> 30
    z = (z * _MUL1) & _MASK
    z ^= z >> 27
    z = (z * _MUL2) & _MASK
    return z ^ (z >> 31)


def u64(seed: int, stream: int, t: int, v: int) -> int:
    x = _mix(seed & _MASK)
    x = _mix(x ^ (stream & _MASK))
    x = _mix(x ^ (t & _MASK))
    x = _mix(x ^ (v & _MASK))
    return x


def u01(seed: int, stream: int, t: int, v: int) -> float:
    return (u64(seed, stream, t, v) >> 11) * _INV53


def _pick(lo: int, hi: int, step: int, u: float) -> int:
    # inverse CDF of the uniform distribution on {lo, lo+step, ..., hi}
    size = (hi - lo) // step + 1
    k = math.ceil(u * size) - 1
    if k < 0:
        k = 0
    return lo + step * k


def sweep(values, nbrs, frozen, clamp_lo, clamp_hi, model_lip: int,
          seed: int, stream: int, t: int) -> int:
    """One systematic heat-bath sweep in linear-index order, in place.

    Returns 0 on success, or v+1 when vertex v admits no allowed value.
    """
    n = len(values)
    deg = nbrs.shape[1]
    for v in range(n):
        if frozen[v]:
            continue
        nmin = nmax = int(values[nbrs[v, 0]])
        for j in range(1, deg):
            x = int(values[nbrs[v, j]])
            if x < nmin:
                nmin = x
            elif x > nmax:
                nmax = x
        if model_lip:
            lo = max(nmax - 1, int(clamp_lo[v]))
            hi = min(nmin + 1, int(clamp_hi[v]))
            step = 1
        else:
            lo = nmax - 1
            hi = nmin + 1
            step = 2
        if lo > hi:
            return v + 1
        values[v] = _pick(lo, hi, step, u01(seed, stream, t, v))
    return 0


def sweep_pair(lower, upper, nbrs, frozen, clamp_lo, clamp_hi, model_lip: int,
               seed: int, stream: int, t: int) -> int:
    """Coupled sweep of two chains sharing the same variates."""
    n = len(lower)
    deg = nbrs.shape[1]
    for v in range(n):
        if frozen[v]:
            continue
        u = u01(seed, stream, t, v)
        for values in (lower, upper):
            nmin = nmax = int(values[nbrs[v, 0]])
            for j in range(1, deg):
                x = int(values[nbrs[v, j]])
                if x < nmin:
                    nmin = x
                elif x > nmax:
                    nmax = x
            if model_lip:
                lo = max(nmax - 1, int(clamp_lo[v]))
                hi = min(nmin + 1, int(clamp_hi[v]))
                step = 1
            else:
                lo = nmax - 1
                hi = nmin + 1
                step = 2
            if lo > hi:
                return v + 1
            values[v] = _pick(lo, hi, step, u)
    return 0
