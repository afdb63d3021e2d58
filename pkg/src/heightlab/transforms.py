"""Expanding transformations on level sets: shift, sign overlay, flips.

The shift moves the function one lattice step inside its level set and
subtracts one; the vertices whose shift-direction edge crosses the level
set become free sign sites.  The flip variant normalizes exposed-vertex
signs to +1, trading image size for reconstructibility from an interior
approximation.  The auditor measures expansion factors exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .cutsets import OddCutset, UnionFind, level_set
from .errors import Inconsistent, NotALevelSet
from .heights import HOM, BoundaryCondition, HeightFunction, is_valid
from .oracle import count_functions


def _require_level_set(f: HeightFunction, bc: BoundaryCondition, x,
                       gamma: OddCutset | None) -> OddCutset:
    actual = level_set(f, x, bc)
    if actual is None:
        raise NotALevelSet("the level set around x is empty")
    if gamma is not None and gamma != actual:
        raise NotALevelSet("supplied cutset is not the level set of f")
    return actual


def shift(f: HeightFunction, bc: BoundaryCondition, x, axis: int = 0,
          gamma: OddCutset | None = None) -> HeightFunction:
    """Replace f(v) by f(v + e_axis) - 1 inside the level set around x."""
    g = _require_level_set(f, bc, x, gamma)
    t = f.torus
    vals = list(f.values)
    for v in g.interior:
        vals[v] = f.values[t.step(v, axis, +1)] - 1
    return f.with_values(vals)


def inverse_shift(g: HeightFunction, bc: BoundaryCondition, gamma: OddCutset,
                  axis: int = 0) -> HeightFunction:
    """Undo the shift given the level set: f(v) = g(v - e_axis) + 1 inside.

    The values of g on the sign sites are not consulted, so any member of
    the sign-overlay image reconstructs the same f.  Raises Inconsistent
    when the result is not a valid function with this level set.
    """
    t = g.torus
    vals = list(g.values)
    for v in gamma.interior:
        vals[v] = g.values[t.step(v, axis, -1)] + 1
    f = g.with_values(vals)
    if not is_valid(f, bc):
        raise Inconsistent("reconstructed function fails validation")
    x = gamma.sources[0]
    if level_set(f, x, bc) != gamma:
        raise Inconsistent("reconstructed function has a different level set")
    return f


class ImageSet:
    """Lazily-enumerated image of one function under a transformation.

    Iteration order is deterministic: sign vectors in binary order over the
    free sign sites sorted by linear index (bit i set means +1).
    """

    def __init__(self, base: HeightFunction, free_sites: Sequence[int],
                 forced_plus: Sequence[int], flip_exposed: frozenset[int],
                 branch: str):
        self.base = base
        self.free_sites = sorted(free_sites)
        self.forced_plus = sorted(forced_plus)
        self.flip_exposed = flip_exposed
        self.branch = branch

    def __len__(self) -> int:
        return 1 << len(self.free_sites)

    def __iter__(self) -> Iterator[HeightFunction]:
        for mask in range(len(self)):
            vals = list(self.base.values)
            for v in self.forced_plus:
                vals[v] = 1
            for i, v in enumerate(self.free_sites):
                vals[v] = 1 if (mask >> i) & 1 else -1
            if self.flip_exposed:
                vals = _flip_negative_components(self.base.torus, vals,
                                                 self.flip_exposed)
            yield self.base.with_values(vals)


def _flip_negative_components(t, vals: list[int], exposed: frozenset[int]) -> list[int]:
    """Negate every zero-free component holding an exposed vertex at -1."""
    uf = UnionFind(t.vertex_count)
    for v, w in t.edges():
        if vals[v] != 0 and vals[w] != 0:
            uf.union(v, w)
    flip_roots = {uf.find(v) for v in exposed if vals[v] == -1}
    if not flip_roots:
        return vals
    return [-x if x != 0 and uf.find(i) in flip_roots else x
            for i, x in enumerate(vals)]


def t1(f: HeightFunction, bc: BoundaryCondition, x, axis: int = 0) -> ImageSet:
    """All sign overlays of the shifted function; size 2^(|Gamma|/Delta)."""
    gamma = _require_level_set(f, bc, x, None)
    base = shift(f, bc, x, axis=axis, gamma=gamma)
    sites = gamma.E11(axis)
    return ImageSet(base, sorted(sites), (), frozenset(), "t1")


def t2(f: HeightFunction, bc: BoundaryCondition, x, axis: int = 0) -> ImageSet:
    """Sign overlays with exposed vertices normalized to +1 by flips."""
    gamma = _require_level_set(f, bc, x, None)
    base = shift(f, bc, x, axis=axis, gamma=gamma)
    sites = gamma.E11(axis)
    exposed = gamma.exposed
    free = sorted(sites - exposed)
    forced = sorted(sites & exposed)
    return ImageSet(base, free, forced, exposed, "t2")


def t_combined(f: HeightFunction, bc: BoundaryCondition, x, lam: float = 0.1,
               axis: int = 0) -> ImageSet:
    """Branch between the two overlays on the exposed-count threshold."""
    gamma = _require_level_set(f, bc, x, None)
    d = f.torus.d
    size = len(gamma.edges)
    log2d = math.log(d) ** 2
    if log2d == 0.0:
        threshold = -math.inf  # d = 1: the t1 branch always applies
    else:
        threshold = (1.0 - lam / log2d) * size / f.torus.degree
    if len(gamma.exposed) >= threshold:
        return t1(f, bc, x, axis=axis)
    return t2(f, bc, x, axis=axis)


# -- interior modifications and possible level sets ---------------------------

def is_interior_modification(g: HeightFunction, f: HeightFunction,
                             bc: BoundaryCondition, x) -> bool:
    """g agrees with f outside the level-set interior and is 1 on exposed."""
    gamma = level_set(f, x, bc)
    if gamma is None or not is_valid(g, bc):
        return False
    inside = gamma.interior
    if any(g.values[v] != f.values[v] for v in g.torus.vertices()
           if v not in inside):
        return False
    return all(g.values[v] == 1 for v in gamma.exposed)


def pls(g: HeightFunction, bc: BoundaryCondition, x, L: int,
        budget: int | None = None) -> set[OddCutset]:
    """Possible level sets: brute force over the whole function class."""
    from .oracle import enumerate_functions
    out: set[OddCutset] = set()
    for f in enumerate_functions(bc, HOM, budget=budget):
        gamma = level_set(f, x, bc)
        if gamma is None or len(gamma.edges) != L:
            continue
        if is_interior_modification(g, f, bc, x):
            out.add(gamma)
    return out


def recover_outer_region(h: HeightFunction, bc: BoundaryCondition,
                         approximation: frozenset[int]) -> frozenset[int]:
    """Union of components of B in {v not in E : h(v) <= 0}.

    For h an interior modification of f and E an interior approximation of
    f's level set, this recovers the outer region A of f exactly.
    """
    t = h.torus
    keep = {v for v in t.vertices()
            if v not in approximation and h.values[v] <= 0}
    uf = UnionFind(t.vertex_count)
    for v, w in t.edges():
        if v in keep and w in keep:
            uf.union(v, w)
    roots = {uf.find(b) for b in bc.B if b in keep}
    return frozenset(v for v in keep if uf.find(v) in roots)


def outer_region(f: HeightFunction, bc: BoundaryCondition) -> frozenset[int]:
    """Union of components of B in {f <= 0} (the region A)."""
    t = f.torus
    keep = {v for v in t.vertices() if f.values[v] <= 0}
    uf = UnionFind(t.vertex_count)
    for v, w in t.edges():
        if v in keep and w in keep:
            uf.union(v, w)
    roots = {uf.find(b) for b in bc.B if b in keep}
    return frozenset(v for v in keep if uf.find(v) in roots)


# -- exact expansion audit -----------------------------------------------------

@dataclass
class ExpansionAudit:
    out_min: int
    in_max: int
    tau: Fraction
    omega_size: int
    image_size: int
    p_omega: Fraction
    p_image: Fraction
    identity_holds: bool
    inverse_bound_holds: bool


def expansion_audit(omega: Iterable[HeightFunction],
                    transform: Callable[[HeightFunction], Iterable[HeightFunction]],
                    bc: BoundaryCondition, model: str = HOM,
                    total: int | None = None,
                    budget: int | None = None) -> ExpansionAudit:
    """Exact Out, In, tau and the probability identity, all as rationals.

    P(Omega) = |Omega| / |T(Omega)| * P(T(Omega)) is verified against the
    oracle count of the whole function class; every image member must
    validate, otherwise the identity is reported as failing.
    """
    omega = list(omega)
    if not omega:
        raise ValueError("Omega must be non-empty")
    if total is None:
        total = count_functions(bc, model, budget=budget)
    out_min = None
    preimages: dict[tuple[int, ...], int] = {}
    image_valid = True
    for f in omega:
        img = list(transform(f))
        if out_min is None or len(img) < out_min:
            out_min = len(img)
        for g in img:
            if not is_valid(g, bc):
                image_valid = False
            preimages[g.values] = preimages.get(g.values, 0) + 1
    in_max = max(preimages.values())
    image_size = len(preimages)
    p_omega = Fraction(len(omega), total)
    p_image = Fraction(image_size, total)
    identity = image_valid and (
        p_omega == Fraction(len(omega), image_size) * p_image)
    inverse_bound = Fraction(len(omega), image_size) <= Fraction(in_max, out_min)
    return ExpansionAudit(out_min=out_min, in_max=in_max,
                          tau=Fraction(out_min, in_max),
                          omega_size=len(omega), image_size=image_size,
                          p_omega=p_omega, p_image=p_image,
                          identity_holds=identity,
                          inverse_bound_holds=inverse_bound)


def omega_x_l(bc: BoundaryCondition, x, L: int, budget: int | None = None,
              ) -> list[HeightFunction]:
    """All functions whose level set around x has exactly L edges."""
    from .oracle import enumerate_functions
    out = []
    for f in enumerate_functions(bc, HOM, budget=budget):
        gamma = level_set(f, x, bc)
        if gamma is not None and len(gamma.edges) == L:
            out.append(f)
    return out


def realized_level_set_sizes(bc: BoundaryCondition, x,
                             budget: int | None = None) -> dict[int, int]:
    """Map L -> |Omega_{x,L}| over the whole class."""
    from .oracle import enumerate_functions
    sizes: dict[int, int] = {}
    for f in enumerate_functions(bc, HOM, budget=budget):
        gamma = level_set(f, x, bc)
        if gamma is not None:
            sizes[len(gamma.edges)] = sizes.get(len(gamma.edges), 0) + 1
    return sizes
