"""Uniform sampling of height functions.

Two routes: exact sampling by monotone coupling from the past (systematic
scan, counter-based randomness shared across epochs), and plain heat-bath
MCMC as an approximate fallback for instances too large for CFTP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import beta as _beta

from . import kernels
from .errors import CoalescenceBudgetExceeded, NoAllowedValue
from .heights import (HOM, LIP, BoundaryCondition, HeightFunction,
                      extremal_functions)
from .oracle import Distribution, Statistic
from .torus import neighbor_array

_LONG = np.dtype("l")
_FREE_LO = -(1 << 60)
_FREE_HI = 1 << 60


@dataclass(frozen=True)
class RandomSource:
    """Counter-based deterministic randomness: same seed, same samples."""

    seed: int
    stream: int = 0

    def spawn(self, i: int) -> "RandomSource":
        return RandomSource(self.seed, self.stream + i)


@dataclass(frozen=True)
class CftpSchedule:
    """Doubling past start times; variates at time t agree across epochs."""

    epochs: tuple[int, ...]

    @property
    def coalescence_epoch(self) -> int:
        return self.epochs[-1]


@dataclass
class ChainSetup:
    bc: BoundaryCondition
    model: str
    nbrs: np.ndarray
    frozen: np.ndarray
    clamp_lo: np.ndarray
    clamp_hi: np.ndarray
    fmin: np.ndarray
    fmax: np.ndarray

    @property
    def model_lip(self) -> int:
        return 1 if self.model == LIP else 0


def chain_setup(bc: BoundaryCondition, model: str) -> ChainSetup:
    t = bc.torus
    n = t.vertex_count
    lo_f, hi_f = extremal_functions(bc, model)
    nbrs = np.ascontiguousarray(neighbor_array(t), dtype=np.intc)
    frozen = np.zeros(n, dtype=np.uint8)
    clamp_lo = np.full(n, _FREE_LO, dtype=_LONG)
    clamp_hi = np.full(n, _FREE_HI, dtype=_LONG)
    if bc.zero_one:
        for b in bc.B:
            clamp_lo[b] = 0
            clamp_hi[b] = 1
    else:
        for b, m in bc.mu.items():
            frozen[b] = 1
            clamp_lo[b] = clamp_hi[b] = m
    return ChainSetup(bc, model, nbrs,
                      frozen, clamp_lo, clamp_hi,
                      np.array(lo_f.values, dtype=_LONG),
                      np.array(hi_f.values, dtype=_LONG))


# -- single-site update (reference semantics, used in tests and property checks)

def allowed_values(f: HeightFunction, bc: BoundaryCondition, v) -> list[int]:
    """All values at v consistent with f's neighbours and the BC clamp."""
    t = f.torus
    idx = t.as_index(v)
    nb = [f.values[w] for w in t.neighbors(idx)]
    if f.model == HOM:
        lo, hi, step = max(nb) - 1, min(nb) + 1, 2
    else:
        lo, hi, step = max(nb) - 1, min(nb) + 1, 1
        if bc.zero_one and idx in set(bc.B):
            lo, hi = max(lo, 0), min(hi, 1)
    if lo > hi:
        return []
    return list(range(lo, hi + 1, step))


def heat_bath_step(f: HeightFunction, bc: BoundaryCondition, v, u: float) -> HeightFunction:
    """Resample f(v) uniformly from the allowed set, via inverse-CDF on u.

    Binary sets: u > 1/2 picks the maximum; intervals: quantile inversion.
    The coupling is monotone: pointwise-ordered inputs stay ordered.
    """
    t = f.torus
    idx = t.as_index(v)
    if not bc.zero_one and idx in set(bc.B):
        raise ValueError("cannot update a frozen boundary vertex")
    allowed = allowed_values(f, bc, idx)
    if not allowed:
        raise NoAllowedValue(f"vertex {idx} has no consistent value")
    k = math.ceil(u * len(allowed)) - 1
    if k < 0:
        k = 0
    vals = list(f.values)
    vals[idx] = allowed[k]
    return f.with_values(vals)


# -- exact sampling: coupling from the past --------------------------------

@dataclass
class CftpResult:
    function: HeightFunction
    schedule: CftpSchedule


def cftp_sample_info(bc: BoundaryCondition, model: str, rng: RandomSource,
                     max_doublings: int = 24) -> CftpResult:
    setup = chain_setup(bc, model)
    t = bc.torus
    epochs = []
    span = 1
    for _ in range(max_doublings + 1):
        epochs.append(span)
        lower = setup.fmin.copy()
        upper = setup.fmax.copy()
        for time in range(-span, 0):
            rc = kernels.sweep_pair(lower, upper, setup.nbrs, setup.frozen,
                                    setup.clamp_lo, setup.clamp_hi,
                                    setup.model_lip, rng.seed, rng.stream, time)
            if rc:
                raise NoAllowedValue(f"invalid state at vertex {rc - 1}")
        if np.array_equal(lower, upper):
            f = HeightFunction(t, tuple(int(x) for x in lower), model)
            return CftpResult(f, CftpSchedule(tuple(epochs)))
        span *= 2
    raise CoalescenceBudgetExceeded(
        f"no coalescence within 2^{max_doublings} sweeps")


def cftp_sample(bc: BoundaryCondition, model: str, rng: RandomSource,
                max_doublings: int = 24) -> HeightFunction:
    """Exact sample from the uniform measure on Hom/Lip(G, B, mu)."""
    return cftp_sample_info(bc, model, rng, max_doublings).function


# -- approximate sampling: plain heat-bath MCMC -----------------------------

def mcmc_sample(bc: BoundaryCondition, model: str, rng: RandomSource,
                sweeps: int, start: str = "min") -> HeightFunction:
    """State after `sweeps` systematic heat-bath sweeps from an extremal start."""
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    setup = chain_setup(bc, model)
    state = setup.fmin.copy() if start == "min" else setup.fmax.copy()
    for time in range(sweeps):
        rc = kernels.sweep(state, setup.nbrs, setup.frozen, setup.clamp_lo,
                           setup.clamp_hi, setup.model_lip,
                           rng.seed, rng.stream, time)
        if rc:
            raise NoAllowedValue(f"invalid state at vertex {rc - 1}")
    return HeightFunction(bc.torus, tuple(int(x) for x in state), model)


def sample_one(bc: BoundaryCondition, model: str, rng: RandomSource,
               method: str = "cftp", sweeps: int = 1000,
               max_doublings: int = 24, via_yadin: bool = False) -> HeightFunction:
    if via_yadin and model == LIP:
        from .bijections import lift_bc, yadin_forward
        f2 = sample_one(lift_bc(bc), HOM, rng, method=method, sweeps=sweeps,
                        max_doublings=max_doublings)
        return yadin_forward(f2, bc.torus)
    if method == "cftp":
        return cftp_sample(bc, model, rng, max_doublings)
    if method == "mcmc":
        return mcmc_sample(bc, model, rng, sweeps)
    raise ValueError(f"unknown method {method!r}")


# -- batch statistics --------------------------------------------------------

@dataclass
class EmpiricalDistribution:
    """Sample counts per statistic value with Clopper-Pearson intervals."""

    counts: dict
    total: int
    confidence: float = 0.99
    intervals: dict = field(default_factory=dict)

    def __post_init__(self):
        a = 1.0 - self.confidence
        for v, k in self.counts.items():
            lo = 0.0 if k == 0 else float(_beta.ppf(a / 2, k, self.total - k + 1))
            hi = 1.0 if k == self.total else float(_beta.ppf(1 - a / 2, k + 1,
                                                             self.total - k))
            self.intervals[v] = (lo, hi)

    def frequency(self, v) -> float:
        return self.counts.get(v, 0) / self.total

    def radius(self, v) -> float:
        lo, hi = self.intervals.get(v, (0.0, 1.0))
        p = self.frequency(v)
        return max(p - lo, hi - p)

    def mean(self) -> float:
        return sum(float(v) * c for v, c in self.counts.items()) / self.total


def batch_statistics(bc: BoundaryCondition, model: str, rng: RandomSource,
                     n: int, stats: Sequence[Statistic], method: str = "cftp",
                     sweeps: int = 1000, max_doublings: int = 24,
                     via_yadin: bool = False, threads: int = 1,
                     ) -> dict[str, EmpiricalDistribution]:
    """n independent samples (sub-stream per sample), counted per statistic.

    With threads > 1 the samples run on a thread pool; the compiled sweep
    kernel releases the GIL, so chains genuinely overlap.  Results do not
    depend on the thread count.
    """
    if n < 1:
        raise ValueError("need at least one sample")

    def draw(i: int) -> HeightFunction:
        return sample_one(bc, model, rng.spawn(i), method=method, sweeps=sweeps,
                          max_doublings=max_doublings, via_yadin=via_yadin)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(draw, range(n)))
    else:
        samples = [draw(i) for i in range(n)]
    counts: dict[str, dict] = {s.name: {} for s in stats}
    for f in samples:
        for s in stats:
            val = s(f, bc)
            counts[s.name][val] = counts[s.name].get(val, 0) + 1
    return {name: EmpiricalDistribution(c, n) for name, c in counts.items()}


def tv_distance(emp: EmpiricalDistribution, exact: Distribution) -> float:
    """Total-variation distance between an empirical law and an exact one."""
    keys = set(emp.counts) | set(exact.support)
    return 0.5 * sum(abs(emp.counts.get(k, 0) / emp.total
                         - float(Fraction(exact.support.get(k, 0), exact.total)))
                     for k in keys)
