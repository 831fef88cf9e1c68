"""Finite metric oracles.

Every oracle exposes ``distance(i, j)`` and a vectorised ``distances(a, b)``
returning the ``len(a) x len(b)`` matrix. Points are integer labels
(grid indices, row numbers). :class:`~starry.treemetric.TreeMetric` and
:class:`~starry.snake.MapMetric` follow the same protocol.
"""

import numpy as np

from .errors import InvalidArgument


class DistanceMatrix:
    def __init__(self, matrix):
        d = np.array(matrix, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InvalidArgument("distance matrix must be square")
        d.setflags(write=False)
        self.matrix = d

    def __len__(self):
        return self.matrix.shape[0]

    def distance(self, i, j):
        return float(self.matrix[i, j])

    def distances(self, a, b):
        return self.matrix[np.ix_(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))]


class EuclideanPoints:
    """Points in R^d with the Euclidean metric; a 1-d array is read as points on a line."""

    def __init__(self, coords):
        x = np.array(coords, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise InvalidArgument("coordinates must be 1-d or 2-d")
        x.setflags(write=False)
        self.coords = x

    def __len__(self):
        return self.coords.shape[0]

    def distance(self, i, j):
        return float(np.linalg.norm(self.coords[i] - self.coords[j]))

    def distances(self, a, b):
        xa = self.coords[np.asarray(a, dtype=np.int64)]
        xb = self.coords[np.asarray(b, dtype=np.int64)]
        if xa.shape[1] == 1:
            return np.abs(xa[:, 0][:, None] - xb[:, 0][None, :])
        diff = xa[:, None, :] - xb[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


class FunctionMetric:
    """Wrap a scalar ``d(i, j)`` callable over ``n`` points (slow, for small fixtures)."""

    def __init__(self, d, n):
        self.d = d
        self.n = int(n)

    def __len__(self):
        return self.n

    def distance(self, i, j):
        return float(self.d(i, j))

    def distances(self, a, b):
        return np.array([[self.d(i, j) for j in b] for i in a], dtype=np.float64)


def as_metric(obj, n=None):
    if hasattr(obj, "distances") and hasattr(obj, "distance"):
        return obj
    if callable(obj):
        return FunctionMetric(obj, 0 if n is None else n)
    raise InvalidArgument(f"not a metric oracle: {obj!r}")
