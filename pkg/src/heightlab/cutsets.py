"""Level sets and odd minimal edge cutsets.

An odd cutset separating X from B is a minimal edge cutset whose interior
vertex boundary (on every X side) lies in one bipartition class.  Level
sets of homomorphism height functions with non-positive boundary values
are exactly such cutsets, which is what makes their structure theory
available to the transformation machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from . import kernels
from .errors import BudgetExceeded, PositiveBoundary, RetriesExhausted
from .heights import HOM, BoundaryCondition, HeightFunction, make_bc
from .torus import TorusSpec


class UnionFind:
    """Union-find with path compression; tracks component count."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.count = size

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while v != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
            self.count -= 1


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class OddCutset:
    """An edge cutset with cached component structure and boundary sets.

    Immutable after construction; invariants are verified by
    `omcut_violations`, never assumed.
    """

    def __init__(self, torus: TorusSpec, edges: Iterable[tuple[int, int]],
                 sources: Sequence[int], targets: Sequence[int],
                 odd_parity: int = 1):
        self.torus = torus
        self.edges = frozenset(_norm_edge(*e) for e in edges)
        self.sources = tuple(sorted(torus.as_index(v) for v in sources))
        self.targets = tuple(sorted(torus.as_index(v) for v in targets))
        self.odd_parity = odd_parity % 2

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        return (isinstance(other, OddCutset) and self.torus == other.torus
                and self.edges == other.edges and self.sources == other.sources
                and self.targets == other.targets
                and self.odd_parity == other.odd_parity)

    def __hash__(self) -> int:
        return hash((self.torus, self.edges, self.sources, self.targets))

    def __repr__(self) -> str:
        return (f"OddCutset({self.torus}, |edges|={len(self.edges)}, "
                f"x={self.sources}, |B|={len(self.targets)})")

    def sorted_edges(self) -> list[tuple[int, int]]:
        """Canonical representation: sorted list of sorted vertex pairs."""
        return sorted(self.edges)

    # -- cached structure ------------------------------------------------

    @cached_property
    def labels(self) -> list[int]:
        uf = UnionFind(self.torus.vertex_count)
        for v, w in self.torus.edges():
            if _norm_edge(v, w) not in self.edges:
                uf.union(v, w)
        return [uf.find(v) for v in self.torus.vertices()]

    @cached_property
    def interior(self) -> frozenset[int]:
        """comp(Gamma, x) union over all sources."""
        src_labels = {self.labels[x] for x in self.sources}
        return frozenset(v for v in self.torus.vertices()
                         if self.labels[v] in src_labels)

    @cached_property
    def plaquette(self) -> dict[int, int]:
        """P_Gamma(v): number of cutset edges incident to v (0 omitted)."""
        p: dict[int, int] = {}
        for v, w in self.edges:
            p[v] = p.get(v, 0) + 1
            p[w] = p.get(w, 0) + 1
        return p

    def P(self, v: int) -> int:
        return self.plaquette.get(v, 0)

    @cached_property
    def E1(self) -> frozenset[int]:
        """Interior vertex boundary on the source side."""
        return frozenset(v for v in self.plaquette if v in self.interior)

    @cached_property
    def E0(self) -> frozenset[int]:
        tgt_labels = {self.labels[b] for b in self.targets}
        return frozenset(v for v in self.plaquette if self.labels[v] in tgt_labels)

    def E11(self, axis: int = 0) -> frozenset[int]:
        """Source-boundary vertices whose +e_axis edge crosses the cutset."""
        t = self.torus
        return frozenset(v for v in self.E1
                         if _norm_edge(v, t.step(v, axis, +1)) in self.edges)

    @cached_property
    def exposed(self) -> frozenset[int]:
        """E_{1,e}: v in E_1 with P(v) >= Delta - sqrt(d), as an integer test."""
        deg, d = self.torus.degree, self.torus.d
        return frozenset(v for v in self.E1 if (deg - self.P(v)) ** 2 <= d)

    def component_boundary(self, v: int) -> frozenset[int]:
        """E_i(Gamma, v): inner boundary of comp(Gamma, v)."""
        lab = self.labels[self.torus.as_index(v)]
        return frozenset(w for w in self.plaquette if self.labels[w] == lab)

    def n_vector(self, v: int) -> tuple[int, ...]:
        """Bit per direction: 1 iff the step lands in the source component."""
        t = self.torus
        return tuple(1 if t.step(v, ax, s) in self.interior else 0
                     for ax, s in t.directions())

    def is_trivial(self) -> bool:
        """True iff the cutset is all edges incident to one source/target."""
        t = self.torus
        for v in list(self.sources) + list(self.targets):
            if self.edges == frozenset(_norm_edge(v, w) for w in t.neighbors(v)):
                return True
        return False


def trivial_cutset(t: TorusSpec, v, sources, targets, odd_parity: int = 1) -> OddCutset:
    idx = t.as_index(v)
    edges = [ _norm_edge(idx, w) for w in t.neighbors(idx) ]
    return OddCutset(t, edges, sources, targets, odd_parity)


# -- level sets ------------------------------------------------------------

def _components_containing(t: TorusSpec, keep: set[int], anchors: Iterable[int]) -> set[int]:
    """Union of connected components (within `keep`) that meet `anchors`."""
    uf = UnionFind(t.vertex_count)
    for v, w in t.edges():
        if v in keep and w in keep:
            uf.union(v, w)
    roots = {uf.find(a) for a in anchors if a in keep}
    return {v for v in keep if uf.find(v) in roots}


def level_set(f: HeightFunction, x, bc: BoundaryCondition) -> OddCutset | None:
    """Outermost height-1 level set of f around x, coming from B.

    Returns None when x belongs to the outer region A (the components of B
    inside {f <= 0}); otherwise the edges between A and the component of x
    in the complement.
    """
    if bc.zero_one:
        raise PositiveBoundary("level sets need an explicit non-positive mu")
    if any(m > 0 for m in bc.mu.values()):
        raise PositiveBoundary("level sets need non-positive boundary values")
    if f.model != HOM:
        raise ValueError("level sets are defined for homomorphism functions")
    t = f.torus
    xi = t.as_index(x)
    low = {v for v in t.vertices() if f.values[v] <= 0}
    a = _components_containing(t, low, bc.B)
    if xi in a:
        return None
    rest = set(t.vertices()) - a
    comp_x = _components_containing(t, rest, [xi])
    edges = []
    for v in comp_x:
        for w in t.neighbors(v):
            if w not in comp_x:
                edges.append(_norm_edge(v, w))
    off = bc.parity_offset or 0
    return OddCutset(t, edges, (xi,), bc.B, odd_parity=(off + 1) % 2)


def level_set_at_height(f: HeightFunction, x, bc: BoundaryCondition,
                        i: int) -> OddCutset | None:
    """Outermost height-i level set: LS(f - (i-1), x, shifted BC)."""
    if bc.zero_one:
        raise PositiveBoundary("level sets need an explicit mu")
    if any(m > i - 1 for m in bc.mu.values()):
        raise PositiveBoundary(f"boundary values must be <= {i - 1}")
    shifted_mu = {b: m - (i - 1) for b, m in bc.mu.items()}
    shifted_bc = make_bc(bc.torus, "explicit", B=bc.B, mu=shifted_mu)
    return level_set(f.shifted(-(i - 1)), x, shifted_bc)


# -- profiles and invariants -------------------------------------------------

@dataclass
class CutsetProfile:
    """Boundary regularity summary of a cutset, source side."""

    size: int
    r_total: int                      # sum of min(P, Delta - P) over E_1
    histogram: dict[int, int]         # P value -> count over E_1
    exposed_count: int
    direction_counts: tuple[int, ...]  # edges from E_1 per direction
    trivial: bool


def cutset_profile(gamma: OddCutset) -> CutsetProfile:
    t = gamma.torus
    deg = t.degree
    hist: dict[int, int] = {}
    r_total = 0
    for v in gamma.E1:
        p = gamma.P(v)
        hist[p] = hist.get(p, 0) + 1
        r_total += min(p, deg - p)
    dir_counts = tuple(
        sum(1 for v in gamma.E1 if _norm_edge(v, t.step(v, ax, s)) in gamma.edges)
        for ax, s in t.directions())
    return CutsetProfile(size=len(gamma.edges), r_total=r_total, histogram=hist,
                         exposed_count=len(gamma.exposed),
                         direction_counts=dir_counts, trivial=gamma.is_trivial())


def subcut(gamma: OddCutset, v) -> OddCutset:
    """All edges between comp(Gamma, v) and its complement."""
    t = gamma.torus
    idx = t.as_index(v)
    lab = gamma.labels[idx]
    comp = {w for w in t.vertices() if gamma.labels[w] == lab}
    edges = [_norm_edge(a, b) for a in comp for b in t.neighbors(a) if b not in comp]
    if any(gamma.labels[s] == lab for s in gamma.sources):
        return OddCutset(t, edges, (idx,), gamma.targets, gamma.odd_parity)
    if any(gamma.labels[b] == lab for b in gamma.targets):
        return OddCutset(t, edges, gamma.sources, (idx,), gamma.odd_parity)
    raise ValueError("vertex lies in neither the source nor the target side")


def gamma_adjacency(gamma: OddCutset, v) -> list[int]:
    """Vertices v+f_i+f_j with the f_i edge in the cutset and f_j edge not."""
    t = gamma.torus
    idx = t.as_index(v)
    dirs = t.directions()
    out = set()
    for i, (ax_i, s_i) in enumerate(dirs):
        a = t.step(idx, ax_i, s_i)
        if _norm_edge(idx, a) not in gamma.edges:
            continue
        for j, (ax_j, s_j) in enumerate(dirs):
            if i == j:
                continue
            b = t.step(idx, ax_j, s_j)
            if a == b:
                continue  # f_i = -f_j
            if t.step(a, ax_j, s_j) == idx:
                continue
            if _norm_edge(idx, b) in gamma.edges:
                continue
            out.add(t.step(a, ax_j, s_j))
    return sorted(out)


def omcut_violations(gamma: OddCutset) -> list[str]:
    """Full invariant suite; empty list means the cutset passes."""
    t = gamma.torus
    deg = t.degree
    bad: list[str] = []
    labels = gamma.labels
    src_labels = {labels[x] for x in gamma.sources}
    tgt_labels = {labels[b] for b in gamma.targets}
    if src_labels & tgt_labels:
        bad.append("cutset does not separate sources from targets")
        return bad
    all_labels = set(labels)
    if all_labels - (src_labels | tgt_labels):
        bad.append("component contains neither a source nor a target (not minimal)")
    for v, w in gamma.edges:
        sides = {labels[v] in src_labels, labels[w] in src_labels}
        if sides != {True, False}:
            bad.append(f"edge {(v, w)} does not join the two sides (not minimal)")
    # oddness
    for v in gamma.E1:
        if t.parity(v) != gamma.odd_parity:
            bad.append(f"interior boundary vertex {v} has wrong parity")
    # equal edge counts per direction
    prof = cutset_profile(gamma)
    if len(set(prof.direction_counts)) > 1:
        bad.append(f"direction counts differ: {prof.direction_counts}")
    # |E_{1,1}| = |Gamma| / Delta
    if len(gamma.edges) % deg != 0 or len(gamma.E11(0)) != len(gamma.edges) // deg:
        bad.append("|E_{1,1}| != |Gamma|/Delta")
    # neighbour plaquette inequality
    for v, w in gamma.edges:
        if gamma.P(v) + gamma.P(w) < deg:
            bad.append(f"plaquette sum below degree on edge {(v, w)}")
    # single-point component boundary or interior plaquette bounds
    for v in list(gamma.sources) + list(gamma.targets):
        ei = gamma.component_boundary(v)
        if ei != {t.as_index(v)}:
            for w in ei:
                if not (1 <= gamma.P(w) <= deg - 1):
                    bad.append(f"P({w}) out of range on E_i around {v}")
    # interior plaquette estimate
    for u in t.vertices():
        for v in t.neighbors(u):
            if _norm_edge(u, v) in gamma.edges or gamma.P(v) == 0:
                continue
            near = sum(1 for w in t.neighbors(u)
                       if w in gamma.plaquette and labels[w] == labels[u])
            if near < gamma.P(v):
                bad.append(f"interior estimate fails at u={u}, v={v}")
    return bad


# -- enumeration -------------------------------------------------------------

def enumerate_omcut(t: TorusSpec, X, B, max_edges: int | None = None,
                    budget: int | None = None, odd_parity: int = 1,
                    ) -> Iterator[OddCutset]:
    """All odd minimal cutsets separating X from B, each exactly once.

    The interior of such a cutset is determined by its odd-class vertex
    set O: even interior vertices are exactly the non-B vertices with all
    neighbours in O.  Enumeration therefore walks subsets of the odd class.
    """
    xs = tuple(sorted({t.as_index(v) for v in (X if _is_listlike(X) else [X])}))
    bs = tuple(sorted({t.as_index(v) for v in (B if _is_listlike(B) else [B])}))
    if set(xs) & set(bs):
        return
    odd = [v for v in t.vertices() if t.parity(v) == odd_parity]
    pos = {v: i for i, v in enumerate(odd)}
    bset = set(bs)
    forced = 0
    for x in xs:
        if t.parity(x) == odd_parity:
            if x in bset:
                return
            forced |= 1 << pos[x]
    banned = 0
    for b in bs:
        if t.parity(b) == odd_parity:
            banned |= 1 << pos[b]
    if forced & banned:
        return
    free_bits = [i for i, v in enumerate(odd)
                 if not (forced >> i) & 1 and not (banned >> i) & 1]
    limit = budget if budget is not None else 1 << 26
    if 1 << len(free_bits) > limit:
        raise BudgetExceeded("odd-subset space too large",
                             nodes=1 << len(free_bits))
    # neighbour masks of even vertices over the odd class
    evens = [v for v in t.vertices() if t.parity(v) != odd_parity and v not in bset]
    even_mask = {v: _mask_of(t.neighbors(v), pos) for v in evens}
    xset = set(xs)
    n_free = len(free_bits)
    for sub in range(1 << n_free):
        o_mask = forced
        for i in range(n_free):
            if (sub >> i) & 1:
                o_mask |= 1 << free_bits[i]
        members = {odd[i] for i in range(len(odd)) if (o_mask >> i) & 1}
        for v in evens:
            m = even_mask[v]
            if m and (m & o_mask) == m:
                members.add(v)
        if not xset <= members:
            continue
        gamma = _cutset_from_interior(t, members, xs, bs, odd_parity)
        if gamma is None:
            continue
        if max_edges is not None and len(gamma.edges) > max_edges:
            continue
        yield gamma


def _is_listlike(v) -> bool:
    if isinstance(v, (list, set, frozenset, range)):
        return True
    # a coordinate tuple is a single vertex; a tuple of vertices is a set
    return isinstance(v, tuple) and v and isinstance(v[0], (tuple, list))


def _mask_of(vertices: Iterable[int], pos: dict[int, int]) -> int:
    m = 0
    for v in vertices:
        i = pos.get(v)
        if i is None:
            return 0  # an even vertex adjacent outside the odd class: impossible
        m |= 1 << i
    return m


def _cutset_from_interior(t: TorusSpec, members: set[int], xs, bs,
                          odd_parity: int) -> OddCutset | None:
    """Boundary of `members` if it is a valid odd minimal cutset."""
    uf = UnionFind(t.vertex_count)
    for v, w in t.edges():
        if (v in members) == (w in members):
            uf.union(v, w)
    inside = {uf.find(x) for x in xs}
    outside = {uf.find(b) for b in bs}
    comp_in = {uf.find(v) for v in members}
    comp_out = {uf.find(v) for v in t.vertices() if v not in members}
    if comp_in != inside or comp_out != outside:
        return None
    edges = [_norm_edge(v, w) for v in members for w in t.neighbors(v)
             if w not in members]
    return OddCutset(t, edges, xs, bs, odd_parity)


def enumerate_omcut_bruteforce(t: TorusSpec, X, B, max_edges: int | None = None,
                               odd_parity: int = 1) -> list[OddCutset]:
    """Independent strategy: filter every edge subset.  Tiny tori only."""
    xs = sorted({t.as_index(v) for v in (X if _is_listlike(X) else [X])})
    bs = sorted({t.as_index(v) for v in (B if _is_listlike(B) else [B])})
    all_edges = t.edges()
    if len(all_edges) > 20:
        raise BudgetExceeded("too many edges for subset filtering")
    found = []
    for mask in range(1, 1 << len(all_edges)):
        edges = [e for i, e in enumerate(all_edges) if (mask >> i) & 1]
        if max_edges is not None and len(edges) > max_edges:
            continue
        gamma = OddCutset(t, edges, xs, bs, odd_parity)
        labels = gamma.labels
        src = {labels[x] for x in xs}
        tgt = {labels[b] for b in bs}
        if src & tgt:
            continue
        # minimal: every edge joins the X side to the B side, every
        # component holds a source or a target
        ok = all((labels[v] in src) != (labels[w] in src) and
                 (labels[v] in src | tgt) and (labels[w] in src | tgt)
                 for v, w in edges)
        if not ok:
            continue
        if set(labels) - (src | tgt):
            continue
        if any(t.parity(v) != odd_parity
               for x in xs for v in gamma.component_boundary(x)):
            continue
        found.append(gamma)
    return found


def min_odd_cutset_size(t: TorusSpec, X, Y, budget: int | None = None,
                        odd_parity: int = 1) -> int | None:
    """I_r-style oracle: minimal |Gamma| over OMCut(X, Y), None when empty."""
    best = None
    for gamma in enumerate_omcut(t, X, Y, budget=budget, odd_parity=odd_parity):
        if best is None or len(gamma.edges) < best:
            best = len(gamma.edges)
    return best


# -- dominating sets and interior approximation ------------------------------

@dataclass
class DominatingSets:
    e0t: frozenset[int]
    e1t: frozenset[int]
    draws: int


def _a1(gamma: OddCutset, v: int, side: frozenset[int], interior_side: set[int]) -> set[int]:
    t = gamma.torus
    out = set()
    for u in t.neighbors(v):
        if u not in interior_side or _norm_edge(v, u) in gamma.edges:
            continue
        for w in t.neighbors(u):
            if w in side:
                out.add(w)
    return out


def _a2(gamma: OddCutset, v: int, side: frozenset[int], interior_side: set[int],
        d: int) -> set[int]:
    t = gamma.torus
    out = set()
    for u in t.neighbors(v):
        if u not in interior_side or _norm_edge(v, u) in gamma.edges:
            continue
        k = sum(1 for w in t.neighbors(u) if w in side)
        if k * k < d:
            out.add(u)
    return out


def boundary_dominating_sets(gamma: OddCutset, rng, retries: int = 64,
                             ) -> DominatingSets:
    """Randomized skeleton of the two boundaries, verified post-hoc.

    Per-vertex inclusion probability 30 ln d / ((Delta - P(v)) sqrt(d)),
    clamped to [0, 1], then deterministic corrections; properties (b), (c)
    and (d) are checked and the draw retried on failure.  The asymptotic
    size property is reported via R values but never asserted.
    """
    if gamma.is_trivial():
        raise ValueError("dominating sets need a non-trivial cutset")
    t = gamma.torus
    d, deg = t.d, t.degree
    sides = {1: gamma.E1, 0: gamma.E0}
    interior = {1: set(gamma.interior),
                0: set(t.vertices()) - set(gamma.interior)}
    sqrt_d = math.sqrt(d)
    log_d = math.log(d) if d > 1 else 0.0

    a1 = {j: {v: _a1(gamma, v, sides[j], interior[j]) for v in sides[j]}
          for j in (0, 1)}
    a2 = {j: {v: _a2(gamma, v, sides[j], interior[j], d) for v in sides[j]}
          for j in (0, 1)}
    a3 = {j: {v: {w for u in a2[j][v] for w in t.neighbors(u) if w in sides[j]}
              for v in sides[j]} for j in (0, 1)}

    def gamma_neighbors(w: int, other: frozenset[int]) -> list[int]:
        return sorted(u for u in t.neighbors(w)
                      if _norm_edge(w, u) in gamma.edges and u in other)

    for attempt in range(retries):
        es = {}
        for j in (0, 1):
            chosen = set()
            for v in sorted(sides[j]):
                p = 30.0 * log_d / ((deg - gamma.P(v)) * sqrt_d) if d > 1 else 1.0
                if p >= 1.0 or kernels.u01(rng.seed, rng.stream, attempt * 2 + j, v) < p:
                    chosen.add(v)
            es[j] = chosen
        et = {j: set(es[j]) for j in (0, 1)}
        for j in (0, 1):
            # correction sets, as in the construction
            for v in sides[j]:
                if 25 * len(a1[j][v]) ** 2 >= d ** 3 and not (a1[j][v] & es[j]):
                    et[j].add(v)                       # B_{j,1}
                if 2 * gamma.P(v) >= deg:
                    snb = {w for u in es[j] for w in t.neighbors(u)}
                    hit = {w for w in t.neighbors(v) if w in sides[1 - j] and w in snb}
                    if len(hit) ** 2 < d:
                        et[j].add(v)                   # B_{j,2}
            for v in sides[1 - j]:                     # repairs for B_{1-j,3}
                if gamma.P(v) ** 2 <= d and 2 * len(a2[1 - j][v]) >= deg:
                    s_et = {w for u in et[j] for w in t.neighbors(u)}
                    if not (a3[1 - j][v] & s_et):
                        w = min(a3[1 - j][v]) if a3[1 - j][v] else None
                        if w is not None:
                            nb = gamma_neighbors(w, sides[j])
                            if nb:
                                et[j].add(nb[0])
        if not _dominating_violations(gamma, et[0], et[1], a1, a2, a3, sides):
            return DominatingSets(frozenset(et[0]), frozenset(et[1]), attempt + 1)
    raise RetriesExhausted(f"no valid dominating sets in {retries} draws")


def _dominating_violations(gamma: OddCutset, e0t: set[int], e1t: set[int],
                           a1, a2, a3, sides) -> list[str]:
    t = gamma.torus
    d, deg = t.d, t.degree
    et = {0: e0t, 1: e1t}
    bad = []
    for j in (0, 1):
        if not et[j] <= set(sides[j]):
            bad.append(f"E_{j}^t not inside E_{j}")
        s_of_et = {w for u in et[j] for w in t.neighbors(u)}
        s_of_other = {w for u in et[1 - j] for w in t.neighbors(u)}
        for v in sides[j]:
            if 25 * len(a1[j][v]) ** 2 >= d ** 3 and not (a1[j][v] & et[j]):
                bad.append(f"(b) fails at {v} side {j}")
            if 2 * gamma.P(v) >= deg:
                hit = {w for w in t.neighbors(v) if w in sides[1 - j] and w in s_of_et}
                if len(hit) ** 2 < d:
                    bad.append(f"(c) fails at {v} side {j}")
            if gamma.P(v) ** 2 <= d and 2 * len(a2[j][v]) >= deg:
                if not (a3[j][v] & s_of_other):
                    bad.append(f"(d) fails at {v} side {j}")
    return bad


def dominating_violations(gamma: OddCutset, sets: DominatingSets) -> list[str]:
    """Public verifier for properties (b), (c), (d)."""
    t = gamma.torus
    d = t.d
    sides = {1: gamma.E1, 0: gamma.E0}
    interior = {1: set(gamma.interior), 0: set(t.vertices()) - set(gamma.interior)}
    a1 = {j: {v: _a1(gamma, v, sides[j], interior[j]) for v in sides[j]} for j in (0, 1)}
    a2 = {j: {v: _a2(gamma, v, sides[j], interior[j], d) for v in sides[j]} for j in (0, 1)}
    a3 = {j: {v: {w for u in a2[j][v] for w in t.neighbors(u) if w in sides[j]}
              for v in sides[j]} for j in (0, 1)}
    return _dominating_violations(gamma, set(sets.e0t), set(sets.e1t), a1, a2, a3, sides)


def interior_approximation(t: TorusSpec, e0t: Iterable[int], e1t: Iterable[int],
                           n0: dict[int, tuple[int, ...]],
                           n1: dict[int, tuple[int, ...]]) -> frozenset[int]:
    """Reconstruct an interior approximation from skeleton data alone.

    Inputs are the dominating sets and their direction bit-vectors
    (bit i = 1 iff v + f_i lies in the source component); the cutset
    itself is not consulted.  Garbage in is tolerated; callers verify.
    """
    d = t.d
    dirs = t.directions()
    et = {0: set(e0t), 1: set(e1t)}
    nv = {0: n0, 1: n1}
    r_a: dict[int, set[int]] = {0: set(), 1: set()}
    r_b: dict[int, set[int]] = {0: set(), 1: set()}
    for j in (0, 1):
        for vp in et[1 - j]:
            bits = nv[1 - j][vp]
            for i, (ax, s) in enumerate(dirs):
                if bits[i] == j:
                    r_a[j].add(t.step(vp, ax, s))
        for vp in et[j]:
            bits = nv[j][vp]
            for i, (ax, s) in enumerate(dirs):
                if bits[i] == j:
                    u = t.step(vp, ax, s)
                    r_b[j].update(t.neighbors(u))
    v_set: dict[int, set[int]] = {}
    for j in (0, 1):
        v_set[j] = {v for v in t.vertices()
                    if sum(1 for w in t.neighbors(v) if w in r_a[1 - j]) ** 2 < d}
    u_set = {u for u in (v_set[0] - r_b[0])
             if any(w in v_set[1] and w in r_a[1] for w in t.neighbors(u))}
    out = set(r_b[1])
    for u in u_set:
        out.update(t.neighbors(u))
    return frozenset(out)
