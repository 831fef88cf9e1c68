"""Approximate n-stars: verification, zig-zag window scanning and extraction.

An ``(a, eta)``-approximate n-star is a center ``x0`` with satellites
``x1..xn`` and a scale ``rho`` such that

    rho <= d(x0, xi) <= (1 + eta) rho          for every satellite
    (a - eta) rho <= d(xi, xj) <= a rho        for every pair of satellites

with ``a > 1`` and ``0 < eta < (a - 1) / 2``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidArgument, ResolutionError
from .excursion import ExcursionGrid, zigzag_values
from .spaces import as_metric
from .treemetric import TreeMetric


@dataclass(frozen=True, eq=False)
class StarCertificate:
    metric_id: str
    center: int
    satellites: tuple
    a: object            # float or Fraction
    eta: object          # float or Fraction
    rho: float
    center_distances: np.ndarray = field(repr=False)
    pair_distances: np.ndarray = field(repr=False)

    @property
    def n(self):
        return len(self.satellites)

    def holds(self, slack=0.0):
        """Re-check every inequality (``slack`` is a relative allowance)."""
        return _feasible(self.center_distances, self.pair_distances,
                         float(self.a), float(self.eta), self.rho, slack)


@dataclass(frozen=True)
class WindowMatch:
    n: int
    s_idx: int
    t_idx: int
    tol: float
    n_cells: int

    @property
    def cells(self):
        return self.t_idx - self.s_idx

    @property
    def delta(self):
        """Window length in time units."""
        return self.cells / self.n_cells


def star_parameters(n, exact=False):
    """``(A_n, eta_n)`` of the zig-zag star construction; ``A_n > 2`` needs ``n >= 6``."""
    e = Fraction(2) ** (4 - n)
    a = (2 + e) / (1 - e)
    eta = (1 + e) / (1 - e) - 1
    return (a, eta) if exact else (float(a), float(eta))


def _check_params(a, eta):
    a, eta = float(a), float(eta)
    if not a > 1:
        raise InvalidArgument(f"need a > 1, got {a}")
    if not 0 < eta < (a - 1) / 2:
        raise InvalidArgument(f"need 0 < eta < (a - 1)/2 = {(a - 1) / 2}, got {eta}")
    return a, eta


def _feasible(cd, pd, a, eta, rho, slack=0.0):
    if not rho > 0:
        return False
    lo, hi = 1 - slack, 1 + slack
    if np.any(cd < rho * lo) or np.any(cd > (1 + eta) * rho * hi):
        return False
    off = pd[~np.eye(pd.shape[0], dtype=bool)]
    return bool(np.all(off >= (a - eta) * rho * lo) and np.all(off <= a * rho * hi))


def _rho_candidates(cd, pd, a, eta):
    off = pd[~np.eye(pd.shape[0], dtype=bool)]
    cmin, cmax = float(cd.min()), float(cd.max())
    yield cmin
    lo = cmax / (1 + eta)
    if lo <= cmin:
        yield from np.linspace(lo, cmin, 8).tolist()
    # closed-form feasible interval for rho, if non-empty
    lo = max(lo, float(off.max()) / a)
    hi = min(cmin, float(off.min()) / (a - eta))
    if lo <= hi:
        yield from (0.5 * (lo + hi), lo, hi)


def verify_star(metric, center, satellites, a, eta, rho=None, metric_id="tree"):
    """Certificate for the proposed star, or ``None`` if no scale ``rho`` works.

    If ``rho`` is given it is tried first. Otherwise the minimal center
    distance is tried, then an 8-point sweep over
    ``[max d(x0, xi) / (1 + eta), min d(x0, xi)]``, then the exact feasible
    interval for ``rho``.
    """
    sats = [int(s) for s in satellites]
    if len(sats) < 2:
        raise InvalidArgument("a star needs at least 2 satellites")
    if len(set(sats + [int(center)])) != len(sats) + 1:
        raise InvalidArgument("center and satellites must be distinct indices")
    af, ef = _check_params(a, eta)
    metric = as_metric(metric)
    cd = np.asarray(metric.distances([int(center)], sats), dtype=np.float64)[0]
    pd = np.asarray(metric.distances(sats, sats), dtype=np.float64)
    candidates = [float(rho)] if rho is not None else []
    candidates += list(_rho_candidates(cd, pd, af, ef))
    for r in candidates:
        if _feasible(cd, pd, af, ef, r):
            return StarCertificate(metric_id, int(center), tuple(sats), a, eta, float(r), cd, pd)
    return None


# -- zig-zag windows -----------------------------------------------------------

def dyadic_lengths(lo_exp, hi_exp):
    return [2 ** e for e in range(lo_exp, hi_exp + 1)]


def interval_family(n, k):
    """Exact endpoints of the k-th level-n interval.

    Consecutive ``k`` tile ``[3/4 - 2**-(n+1), 3/4 - 2**-(n+2))`` left to right
    with lengths ``2**-(n+k+2)``.
    """
    if n < 1 or k < 1:
        raise InvalidArgument("n and k must be >= 1")
    a = Fraction(3, 4) - Fraction(2 ** (k - 1) + 1, 2 ** (n + k + 1))
    return a, a + Fraction(1, 2 ** (n + k + 2))


def family_window_lengths(n, n_cells, k_max=64):
    """Cell counts of the level-n family intervals that are resolvable on the grid."""
    out = []
    for k in range(1, k_max + 1):
        a, b = interval_family(n, k)
        cells = (b - a) * n_cells
        if cells < 4 * n or cells.denominator != 1:
            break
        out.append(int(cells))
    return out


def _scan_length(values, n, length, n_cells):
    stride = max(1, length // 4)
    windows = sliding_window_view(values, length + 1)[::stride]
    scale = math.sqrt(length / n_cells)
    shape = zigzag_values(n, np.arange(length + 1) / length)
    dev = np.abs(windows - windows[:, :1] - scale * shape).max(axis=1) / scale
    starts = np.arange(windows.shape[0]) * stride
    return [(int(s), int(s) + length, float(d)) for s, d in zip(starts, dev)]


def window_deviations(grid, n, length):
    """``(start, end, tol)`` for every window of ``length`` cells at stride ``length // 4``."""
    if length > grid.n_cells:
        raise InvalidArgument(f"window of {length} cells exceeds grid of {grid.n_cells}")
    return _scan_length(grid.values, n, int(length), grid.n_cells)


def scan_windows(grid, n, window_lengths, threads=1):
    """Pairwise disjoint windows where the path follows a rescaled F_n within ``2**(1-n)``.

    Candidate windows are all ``(start, start + L)`` with stride ``L // 4``.
    Among matches, a maximal disjoint family is chosen greedily by earliest
    right endpoint. The result is sorted by start index and does not depend
    on ``threads``.
    """
    if not isinstance(grid, ExcursionGrid):
        raise InvalidArgument("scan_windows needs an ExcursionGrid")
    if n < 2:
        raise InvalidArgument(f"need n >= 2, got {n}")
    lengths = sorted({int(L) for L in window_lengths})
    for L in lengths:
        if L > grid.n_cells:
            raise InvalidArgument(f"window of {L} cells exceeds grid of {grid.n_cells}")
        if L < 4 * n:
            raise InvalidArgument(f"window of {L} cells cannot resolve F_{n} (need >= {4 * n})")
    bound = 2.0 ** (1 - n)

    def one(L):
        return [w for w in _scan_length(grid.values, n, L, grid.n_cells) if w[2] < bound]

    if threads > 1 and len(lengths) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(one, lengths))
    else:
        found = [one(L) for L in lengths]
    hits = sorted((t, s, d) for per_length in found for s, t, d in per_length)
    chosen, last_end = [], -1
    for t, s, d in hits:
        if s > last_end:
            chosen.append(WindowMatch(n, s, t, d, grid.n_cells))
            last_end = t
    return sorted(chosen, key=lambda w: w.s_idx)


def _at(wm, frac):
    return wm.s_idx + round(frac * wm.cells)


def star_from_window(grid, wm, tm=None):
    """Tree star with center at window fraction 1/(4n) and satellites at the peaks.

    The satellites sit at ``(2p+1)/(2n)`` for ``p = 0..n-2``. Verification uses
    ``(A_n, eta_n)`` from :func:`star_parameters` and tries
    ``rho_n = (1 - 2**(4-n)) * sqrt(delta) / 2`` first.
    """
    n = wm.n
    if n < 6:
        raise InvalidArgument(f"zig-zag stars need n >= 6 (A_n > 2), got n = {n}")
    if wm.cells < 4 * n:
        raise ResolutionError(f"window of {wm.cells} cells cannot resolve F_{n}")
    tm = tm if tm is not None else TreeMetric(grid)
    center = _at(wm, Fraction(1, 4 * n))
    sats = [_at(wm, Fraction(2 * p + 1, 2 * n)) for p in range(n - 1)]
    a, eta = star_parameters(n, exact=True)
    rho = float(1 - Fraction(2) ** (4 - n)) * 0.5 * math.sqrt(wm.delta)
    return verify_star(tm, center, sats, a, eta, rho=rho, metric_id="tree")


@dataclass(frozen=True)
class MapStarPoints:
    x: tuple   # x_0 .. x_{n-1}: root-side point and valley (branch) points
    y: tuple   # y_0 .. y_{n-1}: peaks (leaves)

    @property
    def all(self):
        return tuple(sorted(set(self.x) | set(self.y)))


def _sub(wm, lo, hi):
    s = wm.s_idx + math.ceil(lo * wm.cells)
    t = wm.s_idx + math.floor(hi * wm.cells)
    return s, max(s, t)


def map_star_points(grid, wm):
    """Valley and peak indices of a matched window (ties go to the smallest index)."""
    f = grid.values
    n = wm.n

    def arg(lo, hi, fn):
        s, t = _sub(wm, lo, hi)
        return s + int(fn(f[s: t + 1]))

    first = arg(Fraction(0), Fraction(1, 2 * n), np.argmin)
    last = arg(1 - Fraction(1, 2 * n), Fraction(1), np.argmin)
    x0 = first if f[first] >= f[last] else last
    xs = [x0] + [arg(Fraction(2 * p - 1, 2 * n), Fraction(2 * p + 1, 2 * n), np.argmin)
                 for p in range(1, n)]
    ys = [arg(Fraction(p, n), Fraction(p + 1, n), np.argmax) for p in range(n)]
    return MapStarPoints(tuple(xs), tuple(ys))


def map_parameter_sweep(n):
    """``(a, eta)`` pairs bracketing the map-star distance ratios at level n."""
    e = 2.0 ** -n
    a_vals = np.linspace((2 - 16 * e) / (1 + 6 * e), (2 + 16 * e) / (1 - 6 * e), 9)
    eta_star = 32 * e / (1 - 6 * e)
    eta_vals = eta_star * np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    return [(float(a), float(h)) for a in a_vals for h in eta_vals if 0 < h < (a - 1) / 2]


def map_star_from_window(grid, sl, mm, wm):
    """Map star centred at the first valley ``x_1`` with peaks ``y_0..y_{n-2}``.

    Returns ``None`` when the window does not meet the zig-zag tolerance or no
    swept ``(a, eta)`` verifies. Raises :class:`~starry.errors.SubsetError` if
    the points are missing from the map subsample (build the map metric with
    ``include=map_star_points(grid, wm).all``).
    """
    n = wm.n
    if wm.tol >= 2.0 ** (1 - n):
        return None
    if wm.cells < 4 * n:
        raise ResolutionError(f"window of {wm.cells} cells cannot resolve F_{n}")
    pts = map_star_points(grid, wm)
    center = pts.x[1]
    sats = list(pts.y[: n - 1])
    mm.rows([center] + sats)
    if len(set(sats + [center])) != n:
        return None
    for a, eta in map_parameter_sweep(n):
        cert = verify_star(mm, center, sats, a, eta, metric_id="map")
        if cert is not None:
            return cert
    return None


# -- heuristic search ------------------------------------------------------------

def generic_star_search(metric, points, n, a, eta, max_radii=256, metric_id="generic"):
    """Greedy search for an ``(a, eta)``-approximate n-star among ``points``.

    For each center, every distinct positive distance is tried as ``rho``; ring
    points in ``[rho, (1 + eta) rho]`` are added greedily (nearest first) while
    they stay pairwise within ``[(a - eta) rho, a rho]``. Incomplete by design.
    """
    af, ef = _check_params(a, eta)
    metric = as_metric(metric)
    points = np.asarray(points, dtype=np.int64)
    if points.size < n + 1:
        return None
    for c in points:
        d = np.asarray(metric.distances([c], points), dtype=np.float64)[0]
        radii = np.unique(d[d > 0])
        if radii.size > max_radii:
            radii = radii[np.linspace(0, radii.size - 1, max_radii).astype(int)]
        for rho in radii:
            in_ring = (d >= rho) & (d <= (1 + ef) * rho) & (points != c)
            ring = points[in_ring]
            if ring.size < n:
                continue
            order = np.lexsort((ring, d[in_ring]))
            ring = ring[order]
            pd = np.asarray(metric.distances(ring, ring), dtype=np.float64)
            ok = (pd >= (af - ef) * rho) & (pd <= af * rho)
            chosen = []
            for k in range(ring.size):
                if all(ok[k, q] for q in chosen):
                    chosen.append(k)
                    if len(chosen) == n:
                        break
            if len(chosen) == n:
                cert = verify_star(metric, int(c), ring[chosen].tolist(), a, eta, metric_id=metric_id)
                if cert is not None:
                    return cert
    return None
