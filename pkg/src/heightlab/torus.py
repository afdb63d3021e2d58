"""Torus graphs Z_{n_1} x ... x Z_{n_d}.

Vertices carry a natural coordinate system (x_1, ..., x_d) with
0 <= x_i <= n_i - 1 and a row-major linear index over the ascending-sorted
side lengths.  All file formats and arrays in the package use that linear
order.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateTorus, OddSideLength, SideTooSmall


@dataclass(frozen=True)
class TorusSpec:
    """Immutable description of a torus; safe to share between tasks."""

    dims: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def degree(self) -> int:
        # Delta(G) = 2d - #{i : n_i = 2}; a side of length 2 merges +e_i and -e_i.
        return 2 * self.d - sum(1 for n in self.dims if n == 2)

    @property
    def alpha(self) -> int:
        """Size of the smallest section: product of all sides but the largest."""
        return math.prod(self.dims[:-1])

    @property
    def vertex_count(self) -> int:
        return math.prod(self.dims)

    def __str__(self) -> str:
        return "x".join(str(n) for n in self.dims)

    # -- coordinates ----------------------------------------------------

    def index(self, coords: Sequence[int]) -> int:
        idx = 0
        for x, n in zip(coords, self.dims):
            idx = idx * n + (x % n)
        return idx

    def coords(self, index: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.dims):
            out.append(index % n)
            index //= n
        return tuple(reversed(out))

    def as_index(self, v) -> int:
        """Accept either a linear index or a coordinate tuple."""
        if isinstance(v, (tuple, list)):
            if len(v) != self.d:
                raise ValueError(f"expected {self.d} coordinates, got {v!r}")
            return self.index(v)
        return int(v)

    def parity(self, v) -> int:
        return sum(self.coords(self.as_index(v))) % 2

    def vertices(self) -> range:
        return range(self.vertex_count)

    # -- adjacency ------------------------------------------------------

    def directions(self) -> tuple[tuple[int, int], ...]:
        """The Delta(G) neighbour steps, as (axis, step) pairs.

        Order follows the +e_1..+e_d then -e_i convention, where the -e_i
        are only present for axes with n_i > 2.
        """
        k = sum(1 for n in self.dims if n == 2)
        pos = tuple((axis, +1) for axis in range(self.d))
        neg = tuple((axis, -1) for axis in range(k, self.d))
        return pos + neg

    def step(self, v: int, axis: int, delta: int) -> int:
        c = list(self.coords(v))
        c[axis] = (c[axis] + delta) % self.dims[axis]
        return self.index(c)

    def neighbors(self, v) -> list[int]:
        idx = self.as_index(v)
        return [self.step(idx, axis, s) for axis, s in self.directions()]

    def neighbor_coords(self, v) -> list[tuple[int, ...]]:
        return [self.coords(w) for w in self.neighbors(v)]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted index pairs, each exactly once."""
        seen = set()
        for v in self.vertices():
            for w in self.neighbors(v):
                e = (v, w) if v < w else (w, v)
                seen.add(e)
        return sorted(seen)

    def distance(self, u, v) -> int:
        cu = self.coords(self.as_index(u))
        cv = self.coords(self.as_index(v))
        return sum(min(abs(a - b), n - abs(a - b)) for a, b, n in zip(cu, cv, self.dims))

    def diameter(self) -> int:
        return sum(n // 2 for n in self.dims)


def build_torus(dims: Iterable[int]) -> TorusSpec:
    """Construct a torus, sorting side lengths ascending."""
    ds = sorted(int(n) for n in dims)
    if not ds:
        raise SideTooSmall("a torus needs at least one side length")
    for n in ds:
        if n < 2:
            raise SideTooSmall(f"side length {n} < 2")
        if n % 2 != 0:
            raise OddSideLength(f"side length {n} is odd; all sides must be even")
    if len(ds) == 1 and ds[0] == 2:
        raise DegenerateTorus("a single side of length 2 gives a doubled edge")
    return TorusSpec(tuple(ds))


@lru_cache(maxsize=None)
def neighbor_array(t: TorusSpec) -> np.ndarray:
    """(N, Delta) int32 array of neighbour indices in direction order."""
    n = t.vertex_count
    deg = t.degree
    out = np.empty((n, deg), dtype=np.int32)
    for v in range(n):
        out[v, :] = t.neighbors(v)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def parity_array(t: TorusSpec) -> np.ndarray:
    out = np.fromiter((t.parity(v) for v in t.vertices()), dtype=np.int8, count=t.vertex_count)
    out.setflags(write=False)
    return out


# -- metric balls -------------------------------------------------------

@dataclass(frozen=True)
class BallMetrics:
    r: int
    V: int           # |B_r(v)|, independent of v
    E_r_size: int    # |{w in B_r : w + e_d not in B_r}|
    s: int           # Delta(G) * E_r_size = edges leaving B_r


@lru_cache(maxsize=None)
def _ball_from_origin(t: TorusSpec, r: int) -> frozenset[int]:
    if r < 0:
        raise ValueError("radius must be >= 0")
    dist = {0: 0}
    q = deque([0])
    while q:
        v = q.popleft()
        if dist[v] == r:
            continue
        for w in t.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return frozenset(dist)


def ball(t: TorusSpec, v, r: int) -> frozenset[int]:
    """Vertex set of B_r(v), computed by BFS (memoized around the origin)."""
    base = _ball_from_origin(t, r)
    idx = t.as_index(v)
    if idx == 0:
        return base
    offset = t.coords(idx)
    shifted = frozenset(
        t.index([(a + b) % n for a, b, n in zip(t.coords(w), offset, t.dims)])
        for w in base
    )
    return shifted


@lru_cache(maxsize=None)
def ball_metrics(t: TorusSpec, r: int) -> BallMetrics:
    """Exact V(r), |E_r| and s_r around any vertex."""
    b = _ball_from_origin(t, r)
    last = t.d - 1
    e_r = sum(1 for w in b if t.step(w, last, +1) not in b)
    return BallMetrics(r=r, V=len(b), E_r_size=e_r, s=t.degree * e_r)


def edge_boundary_count(t: TorusSpec, r: int) -> int:
    """Direct count of edges leaving B_r(v); oracle for s_r = Delta * |E_r|."""
    b = _ball_from_origin(t, r)
    count = 0
    for w in b:
        for u in t.neighbors(w):
            if u not in b:
                count += 1
    return count


# -- linearity classification -------------------------------------------

@dataclass(frozen=True)
class LinearityClass:
    tag: str                      # "NonLinear" | "Linear" | "Indeterminate"
    lam: float | None
    nonlinear_threshold: float    # n_d <= this  =>  non-linear
    linear_threshold: float       # n_d >= this  =>  lambda-linear


def classify_linearity(t: TorusSpec, lam: float) -> LinearityClass:
    """Classify the torus by the side-length regime.

    Natural logarithms throughout.  For d = 1 the non-linear threshold
    degenerates to +inf; when both conditions hold the non-linear tag wins
    and both thresholds are reported.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    d = t.d
    n_d = t.dims[-1]
    log_d = math.log(d)
    if d == 1 or log_d == 0.0:
        nonlinear_threshold = math.inf
    else:
        nonlinear_threshold = math.exp(t.alpha / (d * log_d ** 3))
    linear_threshold = math.exp(t.alpha / lam)
    if n_d <= nonlinear_threshold:
        tag = "NonLinear"
    elif n_d >= linear_threshold:
        tag = "Linear"
    else:
        tag = "Indeterminate"
    return LinearityClass(tag=tag, lam=(lam if tag == "Linear" else None),
                          nonlinear_threshold=nonlinear_threshold,
                          linear_threshold=linear_threshold)


# -- auxiliary adjacencies ----------------------------------------------

def aux_adjacency(t: TorusSpec, v, kind: str, r: int = 1) -> list[int]:
    """Neighbourhood in an auxiliary graph on the same vertex set.

    kind="diamond": all u sharing a basic 4-cycle with v.
    kind="power":   all u with 1 <= d_G(v, u) <= r.
    """
    idx = t.as_index(v)
    if kind == "power":
        if r < 1:
            raise ValueError("power radius must be >= 1")
        b = ball(t, idx, r)
        return sorted(w for w in b if w != idx)
    if kind != "diamond":
        raise ValueError(f"unknown auxiliary adjacency {kind!r}")
    dirs = t.directions()
    out: set[int] = set()
    for i, (ax_i, s_i) in enumerate(dirs):
        for j, (ax_j, s_j) in enumerate(dirs):
            if i == j:
                continue
            a = t.step(idx, ax_i, s_i)
            b2 = t.step(idx, ax_j, s_j)
            if a == idx or b2 == idx or a == b2:
                continue  # f_i = -f_j collapses the 4-cycle
            c = t.step(a, ax_j, s_j)
            if c == idx:
                continue
            # cycle v, v+f_i, v+f_i+f_j, v+f_j is basic: record the other 3
            out.update((a, b2, c))
    out.discard(idx)
    return sorted(out)
