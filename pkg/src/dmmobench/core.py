"""Shared domain types, the deterministic random-stream contract, and
geometric helpers used by every other module.

The search domain for every benchmark function is the box [-5, 5]^D with
D in {5, 10} for the official problems (2-D instances are allowed for
visualisation).  All arithmetic is IEEE-754 binary64.
"""

import numpy as np

DOMAIN_LOW = -5.0
DOMAIN_HIGH = 5.0

#: Minimum pairwise distance between any two optima, enforced at
#: initialisation and after every environmental change.
MIN_PEAK_DISTANCE = 0.1

#: Attempts allowed when rejection-sampling a spaced point set.
PLACEMENT_ATTEMPTS = 1000

FAMILIES = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8")
CHANGE_MODES = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8")


class RunFrozenError(RuntimeError):
    """Raised when a problem instance is used after its final budget is spent."""


class PlacementError(RuntimeError):
    """Raised when spaced placement or distance repair exceeds its retry cap."""


class RngStream:
    """Deterministic random stream backed by numpy's PCG64 generator.

    The generator algorithm is part of the reproducibility contract:
    identical seeds produce identical draw sequences on every platform,
    so golden files and run records are bit-stable.  Changing the
    generator is a format-breaking change.

    A stream is single-owner: exactly one logical thread of control may
    draw from it.
    """

    def __init__(self, seed, stream=0):
        if seed < 0:
            raise ValueError(f"seed must be >= 0, got {seed}")
        self.seed = seed
        self.stream = stream
        entropy = seed if stream == 0 else (seed, stream)
        self._gen = np.random.Generator(np.random.PCG64(entropy))

    def uniform(self, low, high):
        """One uniform real in [low, high)."""
        return float(self._gen.uniform(low, high))

    def uniform_vector(self, low, high, size):
        return self._gen.uniform(low, high, size)

    def randint(self, low, high):
        """One uniform integer in [low, high], both ends inclusive."""
        return int(self._gen.integers(low, high + 1))

    def normal(self):
        """One standard normal draw."""
        return float(self._gen.standard_normal())

    def normal_vector(self, size):
        return self._gen.standard_normal(size)

    def permutation(self, n):
        """A uniformly random permutation of 1..n."""
        return self._gen.permutation(n) + 1

    def index_permutation(self, n):
        """A uniformly random permutation of 0..n-1."""
        return self._gen.permutation(n)


def make_rng(seed, stream=0):
    """Create a named random stream for the given seed.

    Streams with different `stream` numbers are independent even for the
    same seed; the problem dynamics draw from stream 0 and optimizers
    from stream 1 so neither perturbs the other.
    """
    return RngStream(seed, stream)


def euclidean_distance(a, b):
    """L2 distance between two solution vectors of equal length."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(((a - b) ** 2).sum()))


def pairwise_distances(points):
    """Condensed matrix of pairwise distances between row vectors."""
    points = np.asarray(points, dtype=float)
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff * diff).sum(-1))


def min_pairwise_distance(points):
    """Smallest distance between any two distinct rows (inf for < 2 rows)."""
    n = len(points)
    if n < 2:
        return float("inf")
    dist = pairwise_distances(points)
    return float(dist[np.triu_indices(n, k=1)].min())


def draw_spaced_points(count, dim, rng, min_dist=MIN_PEAK_DISTANCE,
                       low=DOMAIN_LOW, high=DOMAIN_HIGH):
    """Draw `count` points uniformly in the box, rejecting any placement
    closer than `min_dist` to an earlier point.

    The box is vast relative to the exclusion balls, so rejection is
    practically free; exhausting the retry cap indicates a bug.
    """
    points = np.empty((count, dim))
    for i in range(count):
        for _ in range(PLACEMENT_ATTEMPTS):
            candidate = rng.uniform_vector(low, high, dim)
            if i == 0:
                points[i] = candidate
                break
            gaps = np.sqrt(((points[:i] - candidate) ** 2).sum(1))
            if gaps.min() >= min_dist:
                points[i] = candidate
                break
        else:
            raise PlacementError(
                f"could not place point {i + 1}/{count} with spacing {min_dist}")
    return points


def reflect_into_domain(points, low=DOMAIN_LOW, high=DOMAIN_HIGH):
    """Fold coordinates back into [low, high] by reflection at the walls."""
    width = high - low
    folded = np.mod(np.asarray(points, dtype=float) - low, 2.0 * width)
    folded = np.where(folded <= width, folded, 2.0 * width - folded)
    return low + folded


class ProblemSpec:
    """One row of the 24-problem benchmark table."""

    __slots__ = ("index", "family", "mode", "dimension")

    def __init__(self, index, family, mode, dimension):
        self.index = index
        self.family = family
        self.mode = mode
        self.dimension = dimension

    @property
    def group(self):
        number = int(self.index[1:])
        return "G1" if number <= 8 else ("G2" if number <= 16 else "G3")

    def __repr__(self):
        return (f"ProblemSpec({self.index}: {self.family}, "
                f"{self.mode}, D={self.dimension})")

    def __eq__(self, other):
        return (isinstance(other, ProblemSpec)
                and (self.index, self.family, self.mode, self.dimension)
                == (other.index, other.family, other.mode, other.dimension))


def _build_problem_table():
    rows = {}
    # G1: one problem per function family, small-step changes, D=5.
    for i, family in enumerate(FAMILIES, start=1):
        rows[f"P{i}"] = (family, "C1", 5)
    # G2: F8 under every change mode, D=5.
    for i, mode in enumerate(CHANGE_MODES, start=9):
        rows[f"P{i}"] = ("F8", mode, 5)
    # G3: same as G1 but D=10.
    for i, family in enumerate(FAMILIES, start=17):
        rows[f"P{i}"] = (family, "C1", 10)
    return {index: ProblemSpec(index, *row) for index, row in rows.items()}


#: The 24 official problems, P1..P24.
PROBLEM_TABLE = _build_problem_table()

PROBLEM_INDICES = tuple(PROBLEM_TABLE)


def problem_spec(index):
    """Look up a benchmark problem by its P-index."""
    try:
        return PROBLEM_TABLE[index]
    except KeyError:
        raise ValueError(f"unknown problem index {index!r}; expected P1..P24") from None
