"""Tree-indexed Gaussian labels and the Brownian-map pseudometrics.

Labels ``z`` are simulated by a contour walk over the excursion grid that
keeps the ancestral line of the current point on a stack. Conditionally on
the grid, ``Cov(z[i], z[j]) = min f[i..j]``.

``d_circ`` is the label pseudo-distance built from the two cyclic label
minima; ``d_map`` is its chain (shortest-path) closure on a subsample of grid
points, an upper bound for the true map distance.
"""

from dataclasses import dataclass, field
import math

import numba
import numpy as np

from .errors import InvalidArgument, SubsetError
from .rng import STREAM_SNAKE, normals
from .treemetric import SparseTableMin, TreeMetric


@dataclass(frozen=True)
class LabelPlan:
    """Linear recipe turning i.i.d. normals into labels for one grid.

    Node ``k`` gets ``(1 - w[k]) * label[lo[k]] + w[k] * label[hi[k]] + sd[k] * g[k]``
    where ``g[k]`` is the k-th normal of the seed's snake stream. ``point_node[i]``
    is the node holding the label of grid point ``i``.
    """

    lo: np.ndarray
    hi: np.ndarray
    w: np.ndarray
    sd: np.ndarray
    point_node: np.ndarray

    @property
    def n_nodes(self):
        return self.lo.size


def label_plan(values):
    """Walk the contour once and record how every label node is generated."""
    v = np.asarray(values, dtype=np.float64).tolist()
    lo, hi, w, sd = [-1], [-1], [0.0], [0.0]
    point_node = [0] * len(v)
    stack = [(v[0], 0)]  # (height, node) along the current ancestral line

    def new_node(a, b, weight, std):
        lo.append(a)
        hi.append(b)
        w.append(weight)
        sd.append(std)
        return len(lo) - 1

    for i in range(len(v) - 1):
        m = min(v[i], v[i + 1])
        popped = None
        while stack[-1][0] > m:
            popped = stack.pop()
        h0, n0 = stack[-1]
        if h0 < m:
            # branch point strictly inside the segment (h0, h1): bridge between both ends
            h1, n1 = popped
            frac = (m - h0) / (h1 - h0)
            std = math.sqrt((m - h0) * (h1 - m) / (h1 - h0))
            stack.append((m, new_node(n0, n1, frac, std)))
        if v[i + 1] > m:
            parent = stack[-1][1]
            stack.append((v[i + 1], new_node(parent, -1, 0.0, math.sqrt(v[i + 1] - m))))
        point_node[i + 1] = stack[-1][1]

    return LabelPlan(np.array(lo), np.array(hi), np.array(w), np.array(sd),
                     np.array(point_node))


def _evaluate(plan, g):
    """Node labels from normals ``g`` (shape ``(n_nodes,)`` or ``(n_nodes, batch)``)."""
    lo, hi, w, sd = plan.lo.tolist(), plan.hi.tolist(), plan.w.tolist(), plan.sd.tolist()
    if g.ndim == 1:
        g = g.tolist()
        lab = [0.0] * len(lo)
        for k in range(1, len(lo)):
            base = lab[lo[k]]
            if hi[k] >= 0:
                base = base + w[k] * (lab[hi[k]] - base)
            lab[k] = base + sd[k] * g[k]
        return np.array(lab)
    lab = np.zeros(g.shape)
    for k in range(1, len(lo)):
        base = lab[lo[k]]
        if hi[k] >= 0:
            base = base + w[k] * (lab[hi[k]] - base)
        lab[k] = base + sd[k] * g[k]
    return lab


@dataclass(frozen=True, eq=False)
class SnakeLabels:
    grid: object
    z: np.ndarray
    seed: int
    _cyclic: SparseTableMin = field(repr=False, default=None)

    def __post_init__(self):
        z = np.array(self.z, dtype=np.float64)
        z.setflags(write=False)
        object.__setattr__(self, "z", z)
        n = z.size - 1
        doubled = np.concatenate([z[:n], z[: n + 1]])
        object.__setattr__(self, "_cyclic", SparseTableMin(doubled))

    @property
    def n_cells(self):
        return self.z.size - 1

    def cyclic_min(self, a, b):
        """Min of z over [a, b], wrapping through the root when a > b."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n = self.n_cells
        if np.any((a < 0) | (a > n) | (b < 0) | (b > n)):
            raise InvalidArgument(f"index out of range [0, {n}]")
        a = np.where(a == n, 0, a)
        b = np.where(b == n, 0, b)
        end = np.where(a <= b, b, b + n)
        return self._cyclic.min(a, end)

    def d_circ(self, i, j):
        return float(self.d_circ_matrix([i], [j])[0, 0])

    def d_circ_matrix(self, a, b=None):
        a = np.asarray(a, dtype=np.int64)
        b = a if b is None else np.asarray(b, dtype=np.int64)
        ii, jj = np.broadcast_arrays(a[:, None], b[None, :])
        best = np.maximum(self.cyclic_min(ii, jj), self.cyclic_min(jj, ii))
        return self.z[ii] + self.z[jj] - 2 * best


def simulate_labels(tm, seed):
    """Labels for one seed; bit-identical for identical ``(grid, seed)``."""
    if not isinstance(tm, TreeMetric):
        raise InvalidArgument("simulate_labels needs a TreeMetric")
    plan = label_plan(tm.values)
    g = normals(seed, np.arange(plan.n_nodes, dtype=np.uint64), STREAM_SNAKE)
    lab = _evaluate(plan, g)
    return SnakeLabels(tm.grid, lab[plan.point_node], int(seed))


def simulate_labels_batch(tm, seeds):
    """Label arrays for many seeds, shape ``(len(seeds), n_cells + 1)``.

    Row ``k`` equals ``simulate_labels(tm, seeds[k]).z`` exactly.
    """
    plan = label_plan(tm.values)
    counters = np.arange(plan.n_nodes, dtype=np.uint64)
    g = np.stack([normals(s, counters, STREAM_SNAKE) for s in seeds], axis=1)
    lab = _evaluate(plan, g)
    return lab[plan.point_node].T


# -- map metric ----------------------------------------------------------------

STRATEGIES = {"uniform-stride": "stride", "stride": "stride",
              "include-extremes": "extremes", "extremes": "extremes"}


@dataclass(frozen=True, eq=False)
class MapMetric:
    sample_indices: np.ndarray
    d_circ: np.ndarray
    d_map: np.ndarray
    n_cells: int = -1

    def __post_init__(self):
        pos = {int(k): r for r, k in enumerate(self.sample_indices)}
        object.__setattr__(self, "_pos", pos)
        for arr in (self.sample_indices, self.d_circ, self.d_map):
            arr.setflags(write=False)

    def __len__(self):
        return self.sample_indices.size

    def rows(self, idx):
        """Rows of grid indices in the subsample; ``n_cells`` is the root, same as 0."""
        n = self.n_cells
        try:
            return np.array([self._pos[0 if int(i) == n else int(i)] for i in np.atleast_1d(idx)],
                            dtype=np.int64)
        except KeyError as exc:
            raise SubsetError(f"grid index {exc.args[0]} is not in the map subsample") from None

    def distance(self, i, j):
        r = self.rows([i, j])
        return float(self.d_map[r[0], r[1]])

    def distances(self, a, b):
        return self.d_map[np.ix_(self.rows(a), self.rows(b))]


def _stride_indices(n_cells, m):
    return np.unique((np.arange(m, dtype=np.int64) * n_cells) // m)


def select_subset(sl, m, strategy="stride", include=()):
    """Sorted grid indices used as chain points (exactly ``m`` of them)."""
    n = sl.n_cells
    if not 2 <= m <= n:
        raise InvalidArgument(f"subset size must lie in [2, {n}], got {m}")
    kind = STRATEGIES.get(strategy)
    if kind is None:
        raise InvalidArgument(f"unknown subset strategy {strategy!r}")
    chosen = []
    seen = set()

    def take(idx):
        for k in idx:
            k = int(k) % n
            if k not in seen and len(chosen) < m:
                seen.add(k)
                chosen.append(k)

    take(include)
    if kind == "extremes":
        blocks = max(1, (m - len(chosen)) // 2)
        edges = (np.arange(blocks + 1) * n) // blocks
        z = sl.z
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi > lo:
                seg = z[lo:hi]
                take([lo + int(np.argmin(seg)), lo + int(np.argmax(seg))])
    take(_stride_indices(n, m))
    if len(chosen) < m:
        take(range(n))
    return np.array(sorted(chosen), dtype=np.int64)


@numba.njit(cache=True)
def _relax_pass(d):
    n = d.shape[0]
    changed = False
    for k in range(n):
        for i in range(n):
            dik = d[i, k]
            for j in range(n):
                alt = dik + d[k, j]
                if alt < d[i, j]:
                    d[i, j] = alt
                    changed = True
    return changed


def shortest_path_closure(d):
    """All-pairs chain minimisation, repeated until a full pass changes nothing.

    The fixed point satisfies ``d[i, j] <= d[i, k] + d[k, j]`` in floating point
    for every triple, which a single Floyd-Warshall pass does not guarantee.
    Passes alternate with ``min(d, d.T)`` so the result is also exactly symmetric.
    """
    d = np.array(d, dtype=np.float64, order="C")
    while True:
        changed = _relax_pass(d)
        sym = np.minimum(d, d.T)
        if not changed and np.array_equal(sym, d):
            return d
        d = np.ascontiguousarray(sym)


def map_metric(sl, m, strategy="stride", include=()):
    idx = select_subset(sl, m, strategy, include)
    dc = sl.d_circ_matrix(idx)
    return MapMetric(idx, dc, shortest_path_closure(dc), sl.n_cells)


@dataclass
class BoundsReport:
    pairs: np.ndarray            # (P, 2) grid index pairs, i < j
    upper_violations: int        # pairs with d_map > d_circ
    lca_margin: np.ndarray       # d_map - (z_i + z_j - 2 z[lca])
    label_margin: np.ndarray     # d_map - |z_i - z_j|

    tol: float = 0.0

    @property
    def lca_negative(self):
        return int(np.sum(self.lca_margin < -self.tol))

    @property
    def label_negative(self):
        return int(np.sum(self.label_margin < -self.tol))


def check_bounds(sl, tm, mm, rtol=1e-12):
    """Diagnostic comparison of ``d_map`` against the two label lower bounds.

    ``d_map`` over-estimates the true map distance, so negative margins are
    reported, not treated as failures. Only ``d_map <= d_circ`` must hold.
    Margins below ``-rtol * max|z|`` count as negative; smaller ones are rounding.
    """
    if sl.n_cells != tm.n_cells:
        raise InvalidArgument("labels and tree metric use different grids")
    idx = mm.sample_indices
    r, c = np.triu_indices(idx.size)
    i, j = idx[r], idx[c]
    z = sl.z
    dm = mm.d_map[r, c]
    lca = tm.lca_index(i, j)
    return BoundsReport(
        pairs=np.stack([i, j], axis=1),
        upper_violations=int(np.sum(mm.d_map > mm.d_circ)),
        lca_margin=dm - (z[i] + z[j] - 2 * z[lca]),
        label_margin=dm - np.abs(z[i] - z[j]),
        tol=rtol * max(1.0, float(np.max(np.abs(z)))),
    )
