"""Minimal graph container used where a torus is not enough.

The exact oracle's search core works on plain adjacency lists so the same
machinery serves tori, boxes with free boundary, and induced subgraphs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .torus import TorusSpec


@dataclass(frozen=True)
class SiteGraph:
    adj: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        out = set()
        for v, nbrs in enumerate(self.adj):
            for w in nbrs:
                out.add((v, w) if v < w else (w, v))
        return sorted(out)

    def distances_from(self, sources: Sequence[int]) -> list[int]:
        dist = [-1] * self.n
        q = deque()
        for s in sources:
            if dist[s] == -1:
                dist[s] = 0
                q.append(s)
        while q:
            v = q.popleft()
            for w in self.adj[v]:
                if dist[w] == -1:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist


def torus_graph(t: TorusSpec) -> SiteGraph:
    return SiteGraph(tuple(tuple(t.neighbors(v)) for v in t.vertices()))


def box_graph(dims: Sequence[int]) -> SiteGraph:
    """Box P_{n_1} x ... x P_{n_d} with free (non-periodic) boundary."""
    dims = tuple(int(n) for n in dims)
    if any(n < 1 for n in dims):
        raise ValueError("box sides must be >= 1")
    n = math.prod(dims)

    def coords(i):
        out = []
        for m in reversed(dims):
            out.append(i % m)
            i //= m
        return tuple(reversed(out))

    def index(cs):
        i = 0
        for x, m in zip(cs, dims):
            i = i * m + x
        return i

    adj = []
    for v in range(n):
        cs = coords(v)
        nbrs = []
        for axis, m in enumerate(dims):
            for step in (-1, +1):
                x = cs[axis] + step
                if 0 <= x < m:
                    nbrs.append(index(cs[:axis] + (x,) + cs[axis + 1:]))
        adj.append(tuple(sorted(nbrs)))
    return SiteGraph(tuple(adj))


def induced_subgraph(g: SiteGraph, keep: Sequence[int]) -> tuple[SiteGraph, dict[int, int]]:
    """Subgraph on `keep`; returns (graph, old-index -> new-index map)."""
    keep = sorted(set(keep))
    remap = {v: i for i, v in enumerate(keep)}
    adj = tuple(tuple(remap[w] for w in g.adj[v] if w in remap) for v in keep)
    return SiteGraph(adj), remap
