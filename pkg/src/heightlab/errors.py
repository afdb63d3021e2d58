"""Exception hierarchy shared across the package."""


class HeightLabError(Exception):
    """Base class for all heightlab errors."""


# --- torus construction ---

class OddSideLength(HeightLabError):
    pass


class SideTooSmall(HeightLabError):
    pass


class DegenerateTorus(HeightLabError):
    """A one-dimensional torus of length 2 would be a multigraph."""


# --- boundary conditions ---

class EmptyBoundary(HeightLabError):
    pass


class IllegalParity(HeightLabError):
    """Boundary values violate the bipartite parity rule for homomorphisms."""


class InfeasibleBC(HeightLabError):
    """No height function satisfies the boundary condition."""


class PositiveBoundary(HeightLabError):
    """Level sets require non-positive boundary values."""


# --- enumeration / budgets ---

class BudgetExceeded(HeightLabError):
    def __init__(self, message, nodes=None, partial_count=None):
        super().__init__(message)
        self.nodes = nodes
        self.partial_count = partial_count


# --- sampling ---

class NoAllowedValue(HeightLabError):
    """A heat-bath update found no value consistent with the neighbours."""


class CoalescenceBudgetExceeded(HeightLabError):
    pass


# --- transformations ---

class NotALevelSet(HeightLabError):
    pass


class Inconsistent(HeightLabError):
    """Reconstruction from a transformed function failed validation."""


class RetriesExhausted(HeightLabError):
    """The randomized dominating-set construction failed its verifier."""


# --- wall calculus ---

class NotLinearLayout(HeightLabError):
    pass


class NotAWall(HeightLabError):
    pass


class HeightMismatch(HeightLabError):
    pass


class BoundaryInPeak(HeightLabError):
    pass


class NoZeroOnColumn(HeightLabError):
    pass
