"""Continuum-tree pseudometric of an excursion grid.

``d_f(i, j) = f(i) + f(j) - 2 min f[i..j]`` with interval minima answered in
O(1) by a sparse table of argmins.
"""

import numpy as np

from .errors import InvalidArgument
from .excursion import ExcursionGrid


class SparseTableMin:
    """Range-minimum structure over a fixed 1-d array.

    ``argmin(i, j)`` returns the smallest index attaining ``min(a[i..j])``
    (inclusive, order-free). Queries accept scalars or broadcastable arrays.
    """

    def __init__(self, a):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 1 or a.size == 0:
            raise InvalidArgument("need a non-empty 1-d array")
        self.a = a
        n = a.size
        levels = [np.arange(n, dtype=np.int64)]
        span = 1
        while 2 * span <= n:
            prev = levels[-1]
            left, right = prev[: n - 2 * span + 1], prev[span: n - span + 1]
            levels.append(np.where(a[left] <= a[right], left, right))
            span *= 2
        self.table = levels

    def __len__(self):
        return self.a.size

    def _check(self, i, j):
        n = self.a.size
        if np.any((i < 0) | (i >= n) | (j < 0) | (j >= n)):
            raise InvalidArgument(f"index out of range [0, {n - 1}]")

    def argmin(self, i, j):
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        self._check(i, j)
        lo, hi = np.minimum(i, j), np.maximum(i, j)
        length = hi - lo + 1
        k = np.floor(np.log2(length)).astype(np.int64)
        # floor(log2) can be off by one for huge lengths in floating point
        k = np.where((1 << (k + 1)) <= length, k + 1, k)
        k = np.where((1 << k) > length, k - 1, k)
        if k.ndim == 0:
            level = self.table[int(k)]
            left, right = level[lo], level[hi - (1 << int(k)) + 1]
            return int(left if self.a[left] <= self.a[right] else right)
        out = np.empty(k.shape, dtype=np.int64)
        for kk in np.unique(k):
            sel = k == kk
            level = self.table[int(kk)]
            left = level[lo[sel]]
            right = level[hi[sel] - (1 << int(kk)) + 1]
            out[sel] = np.where(self.a[left] <= self.a[right], left, right)
        return out

    def min(self, i, j):
        arg = self.argmin(i, j)
        return float(self.a[arg]) if np.ndim(arg) == 0 else self.a[arg]


class TreeMetric:
    """Pseudometric oracle on the grid points of an excursion.

    Immutable after construction. Points are grid indices ``0..n_cells``;
    indices 0 and ``n_cells`` are the same point of the tree (the root).
    """

    def __init__(self, grid):
        if not isinstance(grid, ExcursionGrid):
            raise InvalidArgument("TreeMetric needs an ExcursionGrid")
        self.grid = grid
        self.values = grid.values
        self.rmq = SparseTableMin(grid.values)

    def __len__(self):
        return len(self.values)

    @property
    def n_cells(self):
        return self.grid.n_cells

    def interval_min(self, i, j):
        return self.rmq.min(i, j)

    def lca_index(self, i, j):
        """Smallest grid index attaining the minimum of the excursion between i and j."""
        return self.rmq.argmin(i, j)

    def dist(self, i, j):
        m = self.rmq.min(i, j)
        return self.values[i] + self.values[j] - 2 * m

    distance = dist

    def distances(self, a, b):
        """Matrix ``d[p, q] = dist(a[p], b[q])``."""
        a = np.asarray(a, dtype=np.int64)[:, None]
        b = np.asarray(b, dtype=np.int64)[None, :]
        m = self.rmq.min(*np.broadcast_arrays(a, b))
        return self.values[a] + self.values[b] - 2 * m

    def is_equivalent(self, i, j):
        return bool(self.dist(i, j) == 0.0)

    def leaves(self):
        v = self.values
        inner = (v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])
        return (np.flatnonzero(inner) + 1).tolist()


def build(grid):
    return TreeMetric(grid)


def interval_min(tm, i, j):
    return tm.interval_min(i, j)


def dist(tm, i, j):
    return tm.dist(i, j)


def is_equivalent(tm, i, j):
    return tm.is_equivalent(i, j)


def leaves(tm):
    return tm.leaves()
