"""Exhaustive enumeration of Hom(G,B,mu) / Lip(G,B,mu) on small instances.

This is the ground-truth oracle for every other module: counts are exact
integers, probabilities exact rationals, never floats.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import BudgetExceeded
from .graphs import SiteGraph, torus_graph
from .heights import (HOM, BoundaryCondition, HeightFunction,
                      extremal_functions, range_of)

DEFAULT_BUDGET = 100_000_000


def _budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("HEIGHTLAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# -- search core ----------------------------------------------------------

def _bfs_order(graph: SiteGraph, sources: Sequence[int]) -> list[int]:
    """Multi-source BFS order over all vertices, ties by index."""
    seen = [False] * graph.n
    order = []
    q = deque()
    for s in sorted(set(sources)):
        seen[s] = True
        q.append(s)
        order.append(s)
    while q:
        v = q.popleft()
        for w in sorted(graph.adj[v]):
            if not seen[w]:
                seen[w] = True
                q.append(w)
                order.append(w)
    if len(order) != graph.n:
        raise ValueError("graph is disconnected")
    return order


def search_graph(graph: SiteGraph, fixed: dict[int, int], lo: Sequence[int],
                 hi: Sequence[int], model: str, budget: int | None = None,
                 ) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of all valid value assignments.

    Vertices are assigned in BFS order from the fixed set (or vertex 0 when
    nothing is fixed), values ascending; candidates are intersected over
    already-assigned neighbours and the [lo, hi] sandwich.  Emission order
    is the deterministic DFS order of that tree, not value-lexicographic.
    """
    n = graph.n
    max_nodes = _budget(budget)
    sources = sorted(fixed) if fixed else [0]
    order = _bfs_order(graph, sources)
    free = [v for v in order if v not in fixed]
    values = [0] * n
    assigned = [False] * n
    for v, m in fixed.items():
        values[v] = m
        assigned[v] = True
    emitted = 0
    nodes = 0

    def candidates(v: int) -> list[int]:
        cands = None
        for w in graph.adj[v]:
            if not assigned[w]:
                continue
            if model == HOM:
                s = {values[w] - 1, values[w] + 1}
            else:
                s = {values[w] - 1, values[w], values[w] + 1}
            cands = s if cands is None else cands & s
        if cands is None:
            return list(range(lo[v], hi[v] + 1))
        return sorted(c for c in cands if lo[v] <= c <= hi[v])

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        nonlocal emitted, nodes
        if k == len(free):
            emitted += 1
            yield tuple(values)
            return
        v = free[k]
        for c in candidates(v):
            nodes += 1
            if nodes > max_nodes:
                raise BudgetExceeded("search-tree node budget exceeded",
                                     nodes=nodes, partial_count=emitted)
            values[v] = c
            assigned[v] = True
            yield from rec(k + 1)
            assigned[v] = False
        return

    yield from rec(0)


def _setup(bc: BoundaryCondition, model: str):
    graph = torus_graph(bc.torus)
    fmin, fmax = extremal_functions(bc, model)
    if bc.zero_one:
        fixed: dict[int, int] = {}
    else:
        fixed = dict(bc.mu)
    return graph, fixed, fmin.values, fmax.values


def raw_enumerate(bc: BoundaryCondition, model: str, budget: int | None = None,
                  ) -> Iterator[tuple[int, ...]]:
    """All valid value tuples, in search order (no materialization)."""
    graph, fixed, lo, hi = _setup(bc, model)
    return search_graph(graph, fixed, lo, hi, model, budget)


def enumerate_functions(bc: BoundaryCondition, model: str, budget: int | None = None,
                        ) -> Iterator[HeightFunction]:
    """Every valid function exactly once, lexicographic in linear-index values."""
    t = bc.torus
    results = sorted(raw_enumerate(bc, model, budget))
    for vals in results:
        yield HeightFunction(t, vals, model)


def count_functions(bc: BoundaryCondition, model: str, budget: int | None = None) -> int:
    return sum(1 for _ in raw_enumerate(bc, model, budget))


# -- statistics -----------------------------------------------------------

@dataclass(frozen=True)
class Statistic:
    """A pure function HeightFunction -> integer or rational, with a name."""

    name: str
    fn: Callable[[HeightFunction, BoundaryCondition], object]

    def __call__(self, f: HeightFunction, bc: BoundaryCondition):
        return self.fn(f, bc)


def stat_height_at(v) -> Statistic:
    def fn(f, bc):
        return f.values[f.torus.as_index(v)]
    label = ",".join(str(c) for c in v) if isinstance(v, (tuple, list)) else str(v)
    return Statistic(f"height@{label}", fn)


def stat_range() -> Statistic:
    return Statistic("range", lambda f, bc: range_of(f))


def stat_level_set_length(x) -> Statistic:
    def fn(f, bc):
        from .cutsets import level_set
        ls = level_set(f, x, bc)
        return 0 if ls is None else len(ls.edges)
    label = ",".join(str(c) for c in x) if isinstance(x, (tuple, list)) else str(x)
    return Statistic(f"levelset@{label}", fn)


def stat_even_zero_fraction() -> Statistic:
    def fn(f, bc):
        even = bc.even_class()
        nonzero = sum(1 for v in even if f.values[v] != 0)
        return Fraction(nonzero, len(even))
    return Statistic("evenzero", fn)


def stat_wall_count() -> Statistic:
    def fn(f, bc):
        from .walls import detect_walls
        return len(detect_walls(f, bc).positions)
    return Statistic("walls", fn)


def parse_statistic_list(text: str) -> list[Statistic]:
    """Split a comma list of statistics, keeping coordinates together.

    "range,height@0,3,walls" -> [range, height@0,3, walls]: a purely
    numeric fragment continues the coordinates of a preceding @-statistic.
    """
    specs: list[str] = []
    for frag in text.split(","):
        if specs and "@" in specs[-1] and frag.strip("-").isdigit():
            specs[-1] += "," + frag
        else:
            specs.append(frag)
    return [parse_statistic(s) for s in specs if s]


def parse_statistic(spec: str) -> Statistic:
    """Parse CLI statistic syntax: range, height@1,1, levelset@0,0, evenzero, walls."""
    if spec == "range":
        return stat_range()
    if spec == "evenzero":
        return stat_even_zero_fraction()
    if spec == "walls":
        return stat_wall_count()
    if spec.startswith("height@"):
        return stat_height_at(_parse_vertex(spec[len("height@"):]))
    if spec.startswith("levelset@"):
        return stat_level_set_length(_parse_vertex(spec[len("levelset@"):]))
    raise ValueError(f"unknown statistic {spec!r}")


def _parse_vertex(text: str):
    parts = text.split(",")
    if len(parts) == 1:
        return int(parts[0])
    return tuple(int(p) for p in parts)


# -- exact distributions ---------------------------------------------------

@dataclass
class Distribution:
    """Exact counts per statistic value; probabilities are rationals."""

    support: dict = field(default_factory=dict)
    total: int = 0

    def add(self, value, count: int = 1) -> None:
        self.support[value] = self.support.get(value, 0) + count
        self.total += count

    def probability(self, value) -> Fraction:
        return Fraction(self.support.get(value, 0), self.total)

    def probabilities(self) -> dict:
        return {v: Fraction(c, self.total) for v, c in sorted(self.support.items())}

    def negated(self) -> "Distribution":
        return Distribution({-v: c for v, c in self.support.items()}, self.total)

    def merge(self, other: "Distribution") -> "Distribution":
        out = Distribution(dict(self.support), self.total)
        for v, c in other.support.items():
            out.add(v, c)
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, Distribution) and self.total == other.total
                and self.support == other.support)


def exact_distribution(bc: BoundaryCondition, model: str, stat: Statistic,
                       budget: int | None = None) -> Distribution:
    t = bc.torus
    dist = Distribution()
    for vals in raw_enumerate(bc, model, budget):
        f = HeightFunction(t, vals, model)
        dist.add(stat(f, bc))
    if dist.total == 0:
        raise ValueError("empty function class; check BC legality first")
    return dist


def exact_probability(bc: BoundaryCondition, model: str,
                      predicate: Callable[[HeightFunction], bool],
                      budget: int | None = None) -> Fraction:
    t = bc.torus
    hits = 0
    total = 0
    for vals in raw_enumerate(bc, model, budget):
        total += 1
        if predicate(HeightFunction(t, vals, model)):
            hits += 1
    return Fraction(hits, total)
