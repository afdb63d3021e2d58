"""Wall calculus on linear tori.

The torus is viewed as Z_n x G^- with the largest side distinguished and a
one-point boundary condition at the origin.  A wall is a pair of adjacent
constant slices; the transformations here (peak reflection, half flip,
wall flip, between-walls reflection, wall building) drive the range lower
bound on linear tori and are all exactly invertible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .cutsets import _norm_edge
from .errors import (BoundaryInPeak, HeightMismatch, NoZeroOnColumn, NotAWall,
                     NotLinearLayout)
from .heights import BoundaryCondition, HeightFunction


@dataclass(frozen=True)
class WallProfile:
    positions: tuple[int, ...]          # even column indices, sorted
    heights: dict[int, int]             # x -> value on W_x^0
    signs: dict[int, int]               # x -> +1 up-wall, -1 down-wall

    def sign_sum(self) -> int:
        return sum(self.signs.values())


class _Frame:
    """Coordinates of the Z_n x G^- presentation."""

    def __init__(self, bc: BoundaryCondition):
        t = bc.torus
        if t.d < 2:
            raise NotLinearLayout("wall calculus needs at least two axes")
        if bc.kind != "one-point" or bc.B != (0,):
            raise NotLinearLayout("wall calculus expects a one-point BC at the origin")
        self.torus = t
        self.axis = t.d - 1          # distinguished (largest) side
        self.n = t.dims[-1]
        self.m = t.alpha
        self.base = 0

    def column(self, v: int) -> int:
        return self.torus.coords(v)[self.axis]

    def w0(self, x: int) -> list[int]:
        t = self.torus
        cols = {x % self.n, (x + 1) % self.n}
        return [v for v in t.vertices()
                if self.column(v) in cols and t.parity(v) == 0]

    def w1(self, x: int) -> list[int]:
        t = self.torus
        cols = {(x + 1) % self.n, (x + 2) % self.n}
        return [v for v in t.vertices()
                if self.column(v) in cols and t.parity(v) == 1]

    def w0_index(self, v: int) -> int:
        """The even y with v in W_y^0 (even vertices only)."""
        z = self.column(v)
        return z if z % 2 == 0 else z - 1

    def w1_index(self, v: int) -> int:
        """The even y with v in W_y^1 (odd vertices only)."""
        z = self.column(v)
        return (z - 1) if z % 2 == 1 else (z - 2) % self.n


def seam_edges(bc: BoundaryCondition) -> frozenset[tuple[int, int]]:
    """Edges between W_0^0 and W_{n-2}^1, exempt in the relaxed class."""
    fr = _Frame(bc)
    a = set(fr.w0(0))
    b = set(fr.w1(fr.n - 2))
    t = bc.torus
    out = set()
    for v in a:
        for w in t.neighbors(v):
            if w in b:
                out.add(_norm_edge(v, w))
    return frozenset(out)


def validate_relaxed(f: HeightFunction, bc: BoundaryCondition) -> bool:
    """Homomorphism validity with the seam edges exempt, plus f(base) = 0."""
    fr = _Frame(bc)
    exempt = seam_edges(bc)
    if f.values[fr.base] != 0:
        return False
    return all(abs(f.values[v] - f.values[w]) == 1
               for v, w in f.torus.edges() if _norm_edge(v, w) not in exempt)


def detect_walls(f: HeightFunction, bc: BoundaryCondition) -> WallProfile:
    """Exact wall positions, heights and up/down signs."""
    fr = _Frame(bc)
    positions = []
    heights = {}
    signs = {}
    for x in range(0, fr.n, 2):
        v0 = {f.values[v] for v in fr.w0(x)}
        v1 = {f.values[v] for v in fr.w1(x)}
        if len(v0) == 1 and len(v1) == 1:
            h0, h1 = v0.pop(), v1.pop()
            if abs(h1 - h0) != 1:
                continue  # possible only across the relaxed seam
            positions.append(x)
            heights[x] = h0
            signs[x] = 1 if h1 == h0 + 1 else -1
    return WallProfile(tuple(positions), heights, signs)


# -- reflections ---------------------------------------------------------------

def _component(f: HeightFunction, start: int, avoid_value: int) -> set[int]:
    """Connected component of start in V minus {f = avoid_value}."""
    t = f.torus
    if f.values[start] == avoid_value:
        return set()
    seen = {start}
    q = deque([start])
    while q:
        v = q.popleft()
        for w in t.neighbors(v):
            if w not in seen and f.values[w] != avoid_value:
                seen.add(w)
                q.append(w)
    return seen


def reflect_peak(f: HeightFunction, bc: BoundaryCondition, w, t_height: int,
                 ) -> HeightFunction:
    """Reflect the peak (or lake) of f around w across height t_height."""
    fr = _Frame(bc)
    t = f.torus
    wi = t.as_index(w)
    peak = _component(f, wi, t_height)
    if not peak:
        return f
    if fr.base in peak:
        raise BoundaryInPeak("the base vertex lies inside the peak")
    vals = [2 * t_height - x if i in peak else x for i, x in enumerate(f.values)]
    return f.with_values(vals)


def flip_half(f: HeightFunction, bc: BoundaryCondition, t_level: int) -> HeightFunction:
    """Reflect everything outside the base component of {f != t/2}.

    Works on any torus with a one-point BC at the origin, cycles included.
    """
    if bc.kind != "one-point" or bc.B != (0,):
        raise NotLinearLayout("half flip expects a one-point BC at the origin")
    if t_level % 2 != 0:
        raise ValueError("reflection level must be even")
    half = t_level // 2
    inside = _component(f, 0, half) if f.values[0] != half else set()
    vals = [x if i in inside else t_level - x for i, x in enumerate(f.values)]
    return f.with_values(vals)


def flip_wall(f: HeightFunction, bc: BoundaryCondition, x: int) -> HeightFunction:
    """Flip the wall at x and shift everything to its right by -2 sign.

    Operates in the relaxed class: the output may violate only seam edges.
    """
    fr = _Frame(bc)
    profile = detect_walls(f, bc)
    if x not in profile.signs:
        raise NotAWall(f"no wall at column {x}")
    s = profile.signs[x]
    t = f.torus
    vals = list(f.values)
    for v in t.vertices():
        if t.parity(v) == 0:
            keep = fr.w0_index(v) <= x
        else:
            keep = fr.w1_index(v) < x
        if not keep:
            vals[v] = f.values[v] - 2 * s
    return f.with_values(vals)


def reflect_between_walls(f: HeightFunction, bc: BoundaryCondition,
                          i: int, j: int) -> HeightFunction:
    """Reflect the region between wall ranks i < j around their height."""
    fr = _Frame(bc)
    profile = detect_walls(f, bc)
    if not (0 <= i < j < len(profile.positions)):
        raise NotAWall(f"wall ranks {i}, {j} out of range")
    xi, xj = profile.positions[i], profile.positions[j]
    hi, hj = profile.heights[xi], profile.heights[xj]
    if hi != hj:
        raise HeightMismatch(f"wall heights differ: {hi} vs {hj}")
    t = f.torus
    vals = [2 * hi - val if xi < fr.column(v) <= xj else val
            for v, val in enumerate(f.values)]
    return f.with_values(vals)


# -- the building transformation ------------------------------------------------

def _wall_traversal(fr: _Frame, x: int, start: int) -> list[int]:
    """BFS order of W_x^0 + W_x^1 from start, neighbours by linear index."""
    members = set(fr.w0(x)) | set(fr.w1(x))
    order = [start]
    seen = {start}
    q = deque([start])
    t = fr.torus
    while q:
        v = q.popleft()
        for w in sorted(t.neighbors(v)):
            if w in members and w not in seen:
                seen.add(w)
                order.append(w)
                q.append(w)
    if len(order) != len(members):
        raise NotLinearLayout("wall slab is disconnected")
    return order


def build_wall(f: HeightFunction, bc: BoundaryCondition, x: int) -> HeightFunction:
    """Build an up-wall of height 0 at x by at most 2m - 1 peak reflections."""
    fr = _Frame(bc)
    w0 = fr.w0(x)
    zeros = [v for v in w0 if f.values[v] == 0]
    if not zeros:
        raise NoZeroOnColumn(f"no zero of f on W_{x}^0")
    v0 = min(zeros)
    order = _wall_traversal(fr, x, v0)
    w0_set = set(w0)
    cur = f
    for w in order[1:]:
        val = cur.values[w]
        if w in w0_set:
            if val == 2:
                cur = reflect_peak(cur, bc, w, 1)
            elif val != 0:
                raise NotAWall(f"unexpected value {val} on W_x^0 during build")
        else:
            if val == -1:
                cur = reflect_peak(cur, bc, w, 0)
            elif val != 1:
                raise NotAWall(f"unexpected value {val} on W_x^1 during build")
    return cur


# -- audit predicates -------------------------------------------------------------

def omega_low(f: HeightFunction, eta: float, beta: float) -> bool:
    from .heights import range_of
    n = f.torus.dims[-1]
    return range_of(f) <= eta * n ** beta


def omega_t(f: HeightFunction, t_value: int, beta: float) -> bool:
    t = f.torus
    n = t.dims[-1]
    m = t.alpha
    hits = sum(1 for v in f.values if v == t_value)
    return hits >= 0.5 * n ** (1 - beta) * m


def omega_w(f: HeightFunction, bc: BoundaryCondition, gamma_exp: float) -> bool:
    n = f.torus.dims[-1]
    return len(detect_walls(f, bc).positions) <= n ** gamma_exp


def omega_b(f: HeightFunction, bc: BoundaryCondition, beta: float,
            gamma_exp: float) -> bool:
    n = f.torus.dims[-1]
    profile = detect_walls(f, bc)
    return abs(profile.sign_sum()) > len(profile.positions) - n ** (gamma_exp - beta) / 8


def wall_flip_class(f: HeightFunction, bc: BoundaryCondition,
                    ) -> list[tuple[tuple[int, ...], HeightFunction]]:
    """All wall-flip composites, as (flip subset, result) pairs."""
    positions = detect_walls(f, bc).positions
    out = []
    for mask in range(1 << len(positions)):
        subset = tuple(positions[i] for i in range(len(positions))
                       if (mask >> i) & 1)
        g = f
        for x in subset:
            g = flip_wall(g, bc, x)
        out.append((subset, g))
    return out
