"""The Yadin bijection Lip(G) <-> Hom(G x Z_2) and the mod-3 coloring map.

The doubled graph is realized as the torus with an extra side of length 2;
layer labels are chosen so that layer 0 of a vertex v sits in the even
class, which makes the product-torus adjacency match the description of
two copies of G with cross edges between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import HeightLabError
from .graphs import SiteGraph, box_graph, torus_graph
from .heights import HOM, LIP, BoundaryCondition, HeightFunction, make_bc
from .oracle import raw_enumerate, search_graph
from .torus import TorusSpec, build_torus


class NotLifted(HeightLabError):
    """The function's graph is not the doubled version of the base torus."""


def lift_torus(base: TorusSpec) -> TorusSpec:
    return build_torus((2,) + base.dims)


def lift_vertex(base: TorusSpec, lifted: TorusSpec, v, layer: int) -> int:
    """Index in G x Z_2 of (v, layer); layer 0 lands in the even class."""
    idx = base.as_index(v)
    axis0 = (layer + base.parity(idx)) % 2
    return lifted.index((axis0,) + base.coords(idx))


def lift_bc(bc: BoundaryCondition) -> BoundaryCondition:
    """The doubled boundary condition (B_2, mu_2) of an explicit-mu BC."""
    if bc.zero_one:
        return lift_zero_one_bc(bc)
    base = bc.torus
    lifted = lift_torus(base)
    mu2 = {}
    for b, m in bc.mu.items():
        for layer in (0, 1):
            value = m if layer == m % 2 else m - 1
            mu2[lift_vertex(base, lifted, b, layer)] = value
    return make_bc(lifted, "explicit", B=sorted(mu2), mu=mu2)


def lift_zero_one_bc(bc: BoundaryCondition) -> BoundaryCondition:
    """B_2' = layer-0 copies of B, pinned to zero."""
    base = bc.torus
    lifted = lift_torus(base)
    b2 = sorted(lift_vertex(base, lifted, b, 0) for b in bc.B)
    return make_bc(lifted, "explicit", B=b2, mu={v: 0 for v in b2})


def yadin_forward(f: HeightFunction, base: TorusSpec) -> HeightFunction:
    """g(v) = max of f over the two copies of v; Lipschitz on the base."""
    lifted = f.torus
    if lifted != lift_torus(base):
        raise NotLifted(f"{lifted} is not the double of {base}")
    vals = [max(f.values[lift_vertex(base, lifted, v, 0)],
                f.values[lift_vertex(base, lifted, v, 1)])
            for v in base.vertices()]
    return HeightFunction(base, tuple(vals), LIP)


def yadin_inverse(g: HeightFunction) -> HeightFunction:
    """f(v, i) = g(v) when i matches g(v) mod 2, else g(v) - 1."""
    base = g.torus
    lifted = lift_torus(base)
    vals = [0] * lifted.vertex_count
    for v in base.vertices():
        for layer in (0, 1):
            value = g.values[v] if layer == g.values[v] % 2 else g.values[v] - 1
            vals[lift_vertex(base, lifted, v, layer)] = value
    return HeightFunction(lifted, tuple(vals), HOM)


# -- proper 3-colorings ------------------------------------------------------

@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]

    def __post_init__(self):
        if any(c not in (0, 1, 2) for c in self.colors):
            raise ValueError("colors must be 0, 1 or 2")


def to_coloring(f: HeightFunction) -> Coloring:
    """f mod 3; proper because adjacent heights differ by one."""
    return Coloring(tuple(v % 3 for v in f.values))


def is_proper(coloring: Coloring, graph: SiteGraph) -> bool:
    return all(coloring.colors[v] != coloring.colors[w] for v, w in graph.edges())


def enumerate_colorings(graph: SiteGraph, fixed: dict[int, int],
                        ) -> Iterator[tuple[int, ...]]:
    """All proper 3-colorings extending `fixed`, by backtracking."""
    order = []
    seen = set(fixed)
    stack = sorted(fixed) or [0]
    from collections import deque
    q = deque(stack)
    visited = set(stack)
    bfs = list(stack)
    while q:
        v = q.popleft()
        for w in sorted(graph.adj[v]):
            if w not in visited:
                visited.add(w)
                q.append(w)
                bfs.append(w)
    order = [v for v in bfs if v not in fixed]
    colors = [0] * graph.n
    assigned = [False] * graph.n
    for v, c in fixed.items():
        colors[v] = c
        assigned[v] = True

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            yield tuple(colors)
            return
        v = order[k]
        banned = {colors[w] for w in graph.adj[v] if assigned[w]}
        for c in (0, 1, 2):
            if c in banned:
                continue
            colors[v] = c
            assigned[v] = True
            yield from rec(k + 1)
            assigned[v] = False

    yield from rec(0)


def enumerate_hom_on_graph(graph: SiteGraph, fixed: dict[int, int],
                           budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """Homomorphism height functions on an arbitrary connected graph."""
    lo = [0] * graph.n
    hi = [0] * graph.n
    per_b = {b: graph.distances_from([b]) for b in fixed}
    for v in range(graph.n):
        hi[v] = min(fixed[b] + per_b[b][v] for b in fixed)
        lo[v] = max(fixed[b] - per_b[b][v] for b in fixed)
    return search_graph(graph, fixed, lo, hi, HOM, budget=budget)


# -- bijectivity reports -------------------------------------------------------

@dataclass
class Mod3Report:
    hom_count: int
    col_count: int
    injective: bool
    surjective: bool
    missing: list[tuple[int, ...]]

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def _mod3_report(graph: SiteGraph, hom_values: Iterator[tuple[int, ...]],
                 fixed_colors: dict[int, int], max_missing: int = 5) -> Mod3Report:
    image = set()
    hom_count = 0
    for vals in hom_values:
        hom_count += 1
        image.add(tuple(v % 3 for v in vals))
    col = set(enumerate_colorings(graph, fixed_colors))
    missing = sorted(col - image)[:max_missing]
    return Mod3Report(hom_count=hom_count, col_count=len(col),
                      injective=(len(image) == hom_count),
                      surjective=image == col, missing=missing)


def mod3_check_torus(bc: BoundaryCondition, budget: int | None = None) -> Mod3Report:
    """Is f -> f mod 3 a bijection Hom(G,B,mu) -> col(G,B,mu mod 3)?"""
    graph = torus_graph(bc.torus)
    fixed_colors = {b: m % 3 for b, m in bc.mu.items()}
    return _mod3_report(graph, raw_enumerate(bc, HOM, budget=budget), fixed_colors)


def mod3_check_box(dims: Sequence[int], base: int = 0,
                   budget: int | None = None) -> Mod3Report:
    """Same check on the non-periodic box with a one-point BC."""
    graph = box_graph(dims)
    fixed = {base: 0}
    return _mod3_report(graph, enumerate_hom_on_graph(graph, fixed, budget),
                        {base: 0})


def even_zero_fraction(values: Sequence[int], even_class: Sequence[int]) -> Fraction:
    """Fraction of even-class vertices whose value/color is nonzero."""
    even = list(even_class)
    nonzero = sum(1 for v in even if values[v] != 0)
    return Fraction(nonzero, len(even))
