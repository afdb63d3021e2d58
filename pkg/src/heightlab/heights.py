"""Height functions and boundary conditions.

A height function assigns an integer to every vertex; the homomorphism
model forces adjacent values to differ by exactly one, the Lipschitz model
by at most one.  Boundary conditions pin values on a vertex set B, either
through an explicit map mu or (zero-one family) through the constraint
f(b) in {0, 1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EmptyBoundary, IllegalParity, InfeasibleBC
from .torus import TorusSpec, build_torus

HOM = "hom"
LIP = "lip"
MODELS = (HOM, LIP)


@dataclass(frozen=True)
class HeightFunction:
    torus: TorusSpec
    values: tuple[int, ...]
    model: str

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if len(self.values) != self.torus.vertex_count:
            raise ValueError("value array does not match the torus")

    def __getitem__(self, v) -> int:
        return self.values[self.torus.as_index(v)]

    def with_values(self, values: Iterable[int]) -> "HeightFunction":
        return HeightFunction(self.torus, tuple(int(x) for x in values), self.model)

    def shifted(self, c: int) -> "HeightFunction":
        return self.with_values(x + c for x in self.values)

    def negated(self) -> "HeightFunction":
        return self.with_values(-x for x in self.values)


def range_of(f: HeightFunction) -> int:
    """Number of distinct values taken by f."""
    return len(set(f.values))


def to_json(f: HeightFunction) -> str:
    return json.dumps({"dims": list(f.torus.dims), "model": f.model,
                       "values": list(f.values)})


def from_json(text: str) -> HeightFunction:
    doc = json.loads(text)
    return HeightFunction(build_torus(doc["dims"]), tuple(int(x) for x in doc["values"]),
                          doc["model"])


# -- boundary conditions -------------------------------------------------

ZERO_ONE = "zero-one"


@dataclass(frozen=True)
class BoundaryCondition:
    """A vertex set B with prescribed values.

    mu maps vertex index -> value; it is None for the zero-one family,
    where every assignment B -> {0, 1} is admitted instead.  parity_offset
    anchors the bipartition: the effective even class is
    {v : parity(v) == parity_offset}, chosen so that mu is even on it.  It
    is None when no anchoring makes mu parity-consistent (the BC is then
    Lipschitz-only).
    """

    torus: TorusSpec
    B: tuple[int, ...]
    mu: Mapping[int, int] | None
    kind: str
    parity_offset: int | None = field(default=None)

    def __post_init__(self):
        if not self.B:
            raise EmptyBoundary("boundary set B must be non-empty")

    @property
    def zero_one(self) -> bool:
        return self.mu is None

    def mu_values(self) -> dict[int, int]:
        if self.mu is None:
            raise ValueError("zero-one family carries no mu")
        return dict(self.mu)

    def even_class(self) -> list[int]:
        off = 0 if self.parity_offset is None else self.parity_offset
        t = self.torus
        return [v for v in t.vertices() if t.parity(v) == off]

    def odd_class(self) -> list[int]:
        off = 0 if self.parity_offset is None else self.parity_offset
        t = self.torus
        return [v for v in t.vertices() if t.parity(v) != off]

    def value_parity(self, v) -> int:
        """Parity every homomorphism value at v must have."""
        if self.parity_offset is None:
            raise IllegalParity("boundary values are not parity-consistent")
        return (self.torus.parity(v) - self.parity_offset) % 2

    def describe(self) -> dict:
        doc = {"kind": self.kind, "B": list(self.B)}
        if self.mu is not None:
            doc["mu"] = {str(k): v for k, v in sorted(self.mu.items())}
        return doc


def _parity_offset(t: TorusSpec, mu: Mapping[int, int]) -> int | None:
    offsets = {(t.parity(b) - mu[b]) % 2 for b in mu}
    if len(offsets) == 1:
        return offsets.pop()
    return None


def make_bc(t: TorusSpec, kind: str, *, base=None, B=None, mu=None,
            exclude_two_sides: bool = False) -> BoundaryCondition:
    """Materialize one of the canonical boundary-condition families.

    kind:
      "one-point"  single vertex (default origin) pinned to 0
      "zero"       every second box-boundary vertex pinned to 0
      "box"        the full box boundary pinned to 0 (Lipschitz use)
      "zero-one"   the full box boundary (or explicit B) with f(b) in {0,1}
      "explicit"   caller-supplied B and mu

    Parity anchoring: if mu sits on the odd class, the bipartition labels
    are swapped (parity_offset = 1) so homomorphism legality holds.
    """
    if kind == "one-point":
        b0 = t.as_index(base if base is not None else 0)
        mu_map = {b0: 0}
        return BoundaryCondition(t, (b0,), mu_map, kind,
                                 parity_offset=_parity_offset(t, mu_map))
    if kind == "zero":
        members = []
        for v in t.vertices():
            if t.parity(v) != 0:
                continue
            cs = t.coords(v)
            for x, n in zip(cs, t.dims):
                if exclude_two_sides and n == 2:
                    continue
                if x in (0, n - 1):
                    members.append(v)
                    break
        if not members:
            raise EmptyBoundary("zero BC is empty on this torus")
        mu_map = {v: 0 for v in members}
        return BoundaryCondition(t, tuple(members), mu_map, kind, parity_offset=0)
    if kind in ("box", "zero-one"):
        if B is not None:
            members = sorted(t.as_index(v) for v in B)
        else:
            members = []
            for v in t.vertices():
                cs = t.coords(v)
                if any(x in (0, n - 1) for x, n in zip(cs, t.dims)):
                    members.append(v)
        if not members:
            raise EmptyBoundary("box boundary is empty")
        if kind == "zero-one":
            return BoundaryCondition(t, tuple(members), None, kind)
        mu_map = {v: 0 for v in members}
        return BoundaryCondition(t, tuple(members), mu_map, kind,
                                 parity_offset=_parity_offset(t, mu_map))
    if kind == "explicit":
        if not B:
            raise EmptyBoundary("explicit BC needs B")
        members = sorted(t.as_index(v) for v in B)
        mu_map = {t.as_index(k): int(v) for k, v in dict(mu or {}).items()}
        if set(mu_map) != set(members):
            raise ValueError("mu must be defined exactly on B")
        return BoundaryCondition(t, tuple(members), mu_map, kind,
                                 parity_offset=_parity_offset(t, mu_map))
    raise ValueError(f"unknown BC kind {kind!r}")


# -- validation ----------------------------------------------------------

@dataclass
class ValidationReport:
    edge_violations: list[tuple[int, int]]
    boundary_mismatches: list[int]

    @property
    def ok(self) -> bool:
        return not self.edge_violations and not self.boundary_mismatches


def validate(f: HeightFunction, bc: BoundaryCondition) -> ValidationReport:
    """Report every violated edge constraint and boundary mismatch."""
    if f.torus != bc.torus:
        raise ValueError("height function and BC live on different tori")
    t = f.torus
    vals = f.values
    bad_edges = []
    for v, w in t.edges():
        d = abs(vals[v] - vals[w])
        if (f.model == HOM and d != 1) or (f.model == LIP and d > 1):
            bad_edges.append((v, w))
    bad_b = []
    if bc.zero_one:
        for b in bc.B:
            if vals[b] not in (0, 1):
                bad_b.append(b)
    else:
        for b, m in bc.mu.items():
            if vals[b] != m:
                bad_b.append(b)
    return ValidationReport(bad_edges, sorted(bad_b))


def is_valid(f: HeightFunction, bc: BoundaryCondition) -> bool:
    return validate(f, bc).ok


# -- extremal functions ---------------------------------------------------

def extremal_functions(bc: BoundaryCondition, model: str) -> tuple[HeightFunction, HeightFunction]:
    """Pointwise minimal and maximal members of the function class.

    f_max(v) = min_b (mu(b) + d_G(v, b)) and f_min symmetrically; for the
    zero-one family the upper envelope uses mu = 1 and the lower mu = 0.
    For legal homomorphism BCs all candidate values share the forced
    parity, so no per-vertex adjustment is needed.
    """
    t = bc.torus
    if model == HOM:
        if bc.zero_one:
            raise IllegalParity("zero-one family is a Lipschitz boundary condition")
        if bc.parity_offset is None:
            raise IllegalParity("boundary values violate the parity rule")
    hi_mu = {b: 1 for b in bc.B} if bc.zero_one else bc.mu
    lo_mu = {b: 0 for b in bc.B} if bc.zero_one else bc.mu
    n = t.vertex_count
    fmax = [min(hi_mu[b] + t.distance(v, b) for b in bc.B) for v in range(n)]
    fmin = [max(lo_mu[b] - t.distance(v, b) for b in bc.B) for v in range(n)]
    if any(a > b for a, b in zip(fmin, fmax)):
        raise InfeasibleBC("f_min exceeds f_max; the function class is empty")
    lo = HeightFunction(t, tuple(fmin), model)
    hi = HeightFunction(t, tuple(fmax), model)
    if not is_valid(lo, bc) or not is_valid(hi, bc):
        raise InfeasibleBC("no witness function satisfies the boundary condition")
    return lo, hi


def assert_legal(bc: BoundaryCondition, model: str) -> None:
    """Raise unless the class Hom/Lip(G, B, mu) is non-empty and legal."""
    extremal_functions(bc, model)


def has_full_projection(t: TorusSpec, B: Iterable[int]) -> bool:
    """True iff some axis direction has every line meeting B."""
    return bool(full_projection_axes(t, B))


def full_projection_axes(t: TorusSpec, B: Iterable[int]) -> list[int]:
    bset = {t.as_index(v) for v in B}
    axes = []
    for axis in range(t.d):
        lines: dict[tuple, bool] = {}
        for v in t.vertices():
            cs = t.coords(v)
            key = cs[:axis] + cs[axis + 1:]
            lines[key] = lines.get(key, False) or (v in bset)
        if all(lines.values()):
            axes.append(axis)
    return axes
