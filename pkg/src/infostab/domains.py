"""Sample grids for every domain the residual and certifier sweeps use, plus
the zero-probability evaluation conventions.

All grids are rational lattices with step 1/resolution.  That keeps sweeps
reproducible, makes refinement nesting exact in floating point (k/R and
2k/(2R) round identically), and guarantees that the anchor 1/2 is a node
whenever the resolution is even.  Point arrays are materialised once per grid
and returned read-only, so grids are safe to share across threads.

Conventions (applied uniformly, for every exponent alpha):

    0 * log2(0) = 0        0 / (0 + 0) = 0        0 ** alpha = 0
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    BudgetExceededError,
    DomainError,
    InvalidResolutionError,
)

__all__ = [
    "pow0",
    "xlog2",
    "ratio0",
    "UnitGrid",
    "TriangleGrid",
    "SimplexGrid",
    "ConeGrid",
    "PairGrid",
    "grid_to_csv",
    "random_unit",
    "random_triangle",
    "random_simplex",
    "random_cone",
]


# ---------------------------------------------------------------------------
# conventions


def pow0(x, alpha):
    """x**alpha with the convention 0**alpha == 0 for every alpha.

    Negative bases are a domain error; everything in this library lives on
    nonnegative coordinates.
    """
    arr = np.asarray(x, dtype=float)
    if arr.size and float(arr.min()) < 0.0:
        bad = float(arr[arr < 0].flat[0])
        raise DomainError(f"negative base {bad!r} in convention power")
    safe = np.where(arr == 0.0, 1.0, arr)
    out = np.where(arr == 0.0, 0.0, np.power(safe, alpha))
    if np.ndim(x) == 0:
        return float(out)
    return out


def xlog2(x):
    """x * log2(x) with the convention 0 * log2(0) == 0."""
    arr = np.asarray(x, dtype=float)
    if arr.size and float(arr.min()) < 0.0:
        bad = float(arr[arr < 0].flat[0])
        raise DomainError(f"negative argument {bad!r} in x*log2(x) convention")
    safe = np.where(arr == 0.0, 1.0, arr)
    out = np.where(arr == 0.0, 0.0, arr * np.log2(safe))
    if np.ndim(x) == 0:
        return float(out)
    return out


def ratio0(num, den):
    """num/den with the convention 0/(0+0) == 0 (zero numerator and denominator)."""
    num_arr = np.asarray(num, dtype=float)
    den_arr = np.asarray(den, dtype=float)
    both_zero = (num_arr == 0.0) & (den_arr == 0.0)
    if np.any((den_arr == 0.0) & ~both_zero):
        raise DomainError("zero denominator with nonzero numerator")
    safe = np.where(both_zero, 1.0, den_arr)
    out = np.where(both_zero, 0.0, num_arr / safe)
    if np.ndim(num) == 0 and np.ndim(den) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# grids


def _freeze(arr):
    arr.flags.writeable = False
    return arr


class _CsvMixin:
    def to_csv(self, path):
        grid_to_csv(self.points, path)


@dataclass(frozen=True)
class UnitGrid(_CsvMixin):
    """Lattice on the unit interval: {k/R} with k = 1..R-1, or 0..R when closed."""

    resolution: int
    closed: bool = False

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidResolutionError(
                f"unit grid needs resolution >= 2, got {self.resolution}"
            )

    @cached_property
    def points(self):
        r = self.resolution
        ks = np.arange(0, r + 1) if self.closed else np.arange(1, r)
        return _freeze(ks / float(r))


@dataclass(frozen=True)
class TriangleGrid(_CsvMixin):
    """Lattice on the triangle domain of the two-variable functional equation.

    Open variant: x, y and x+y all in (0,1), i.e. i,j >= 1 with i+j <= R-1.
    Closed variant: x, y in [0,1) with x+y <= 1 (the asymmetric closure that
    keeps 1-x and 1-y positive), i.e. i,j <= R-1 with i+j <= R.
    """

    resolution: int
    closed: bool = False

    def __post_init__(self):
        least = 2 if self.closed else 3
        if self.resolution < least:
            raise InvalidResolutionError(
                f"triangle grid ({'closed' if self.closed else 'open'}) needs "
                f"resolution >= {least}, got {self.resolution}"
            )

    @cached_property
    def points(self):
        r = self.resolution
        if self.closed:
            i, j = np.meshgrid(np.arange(r), np.arange(r), indexing="ij")
            mask = i + j <= r
        else:
            i, j = np.meshgrid(np.arange(1, r), np.arange(1, r), indexing="ij")
            mask = i + j <= r - 1
        pts = np.stack([i[mask], j[mask]], axis=1) / float(r)
        return _freeze(pts)


@dataclass(frozen=True)
class SimplexGrid(_CsvMixin):
    """Lattice on the probability simplex with n coordinates.

    Open variant: all coordinates k_i/R with k_i >= 1 (strict interior).
    Closed variant: k_i >= 0.  Points are ordered lexicographically in the
    integer compositions, so the first coordinate is nondecreasing.
    """

    n: int
    resolution: int
    closed: bool = False
    budget: int = 10**6

    def __post_init__(self):
        if self.n < 2:
            raise InvalidResolutionError(f"simplex needs n >= 2, got {self.n}")
        least = 1 if self.closed else self.n
        if self.resolution < least:
            raise InvalidResolutionError(
                f"simplex grid needs resolution >= {least} for n={self.n}, "
                f"got {self.resolution}"
            )

    @property
    def count(self):
        r, n = self.resolution, self.n
        if self.closed:
            return math.comb(r + n - 1, n - 1)
        return math.comb(r - 1, n - 1)

    def _cuts(self):
        r, n = self.resolution, self.n
        if self.closed:
            return itertools.combinations(range(r + n - 1), n - 1)
        return itertools.combinations(range(1, r), n - 1)

    def _parts(self, cut_rows):
        # stars and bars: recover integer parts from cut positions
        r, n = self.resolution, self.n
        cuts = np.asarray(cut_rows, dtype=np.int64).reshape(-1, n - 1)
        if self.closed:
            first = cuts[:, :1]
            mid = np.diff(cuts, axis=1) - 1
            last = (r + n - 2) - cuts[:, -1:]
        else:
            first = cuts[:, :1]
            mid = np.diff(cuts, axis=1)
            last = r - cuts[:, -1:]
        return np.concatenate([first, mid, last], axis=1)

    @cached_property
    def points(self):
        if self.count > self.budget:
            raise BudgetExceededError(
                f"simplex grid would hold {self.count} points, over the "
                f"budget of {self.budget}; raise the budget or stream blocks"
            )
        flat = np.fromiter(
            itertools.chain.from_iterable(self._cuts()), dtype=np.int64
        )
        ks = self._parts(flat)
        return _freeze(ks / float(self.resolution))

    def iter_blocks(self, rows=250_000):
        """Yield point blocks of at most ``rows`` rows without materialising
        the whole grid; used for sweeps past the budget."""
        it = self._cuts()
        while True:
            chunk = list(itertools.islice(it, rows))
            if not chunk:
                return
            yield self._parts(chunk) / float(self.resolution)


@dataclass(frozen=True)
class ConeGrid(_CsvMixin):
    """Strictly positive lattice triples in (0, bound]^3 for the cone domain."""

    resolution: int
    bound: float = 1.0
    budget: int = 2_000_000

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidResolutionError(
                f"cone grid needs resolution >= 2, got {self.resolution}"
            )
        if not self.bound > 0:
            raise DomainError(f"cone bound must be positive, got {self.bound}")
        if self.resolution**3 > self.budget:
            raise BudgetExceededError(
                f"cone grid would hold {self.resolution ** 3} points, over "
                f"the budget of {self.budget}"
            )

    @cached_property
    def points(self):
        step = self.bound / self.resolution
        axis = np.arange(1, self.resolution + 1) * step
        x, y, z = np.meshgrid(axis, axis, axis, indexing="ij")
        pts = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
        return _freeze(pts)


@dataclass(frozen=True)
class PairGrid(_CsvMixin):
    """Strictly positive lattice pairs in (0, bound]^2."""

    resolution: int
    bound: float = 1.0

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidResolutionError(
                f"pair grid needs resolution >= 2, got {self.resolution}"
            )
        if not self.bound > 0:
            raise DomainError(f"pair bound must be positive, got {self.bound}")

    @cached_property
    def points(self):
        step = self.bound / self.resolution
        axis = np.arange(1, self.resolution + 1) * step
        u, v = np.meshgrid(axis, axis, indexing="ij")
        return _freeze(np.stack([u.ravel(), v.ravel()], axis=1))


def grid_to_csv(points, path):
    """Write grid points to CSV, one point per row, full float precision."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    np.savetxt(path, arr, delimiter=",", fmt="%.17g")


# ---------------------------------------------------------------------------
# seeded random sampling, secondary mode for property tests


def random_unit(count, rng, closed=False):
    pts = rng.random(count)
    if closed:
        return pts
    return 0.5 + (pts - 0.5) * (1 - 1e-9)


def random_triangle(count, rng):
    """Uniform interior points of the open triangle x,y>0, x+y<1."""
    raw = rng.dirichlet((1.0, 1.0, 1.0), size=count)
    return raw[:, :2]


def random_simplex(n, count, rng):
    return rng.dirichlet(np.ones(n), size=count)


def random_cone(count, rng, bound=1.0):
    return rng.random((count, 3)) * bound
