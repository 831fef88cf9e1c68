"""Excursion functions sampled on a uniform grid of [0, 1].

Three families are provided: discretised Brownian excursions (Wiener path,
bridge, cyclic cut at the minimum), the zig-zag functions F_n, and the
low-dimensional-graph excursion built from ``g + s``.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import InvalidArgument, InvalidExcursion
from .rng import STREAM_WIENER, normals


@dataclass(frozen=True, eq=False)
class ExcursionGrid:
    """Nonnegative path with ``values[i] = f(i / n_cells)`` and zero endpoints."""

    n_cells: int
    values: np.ndarray
    provenance: str = "file"

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if self.n_cells < 2:
            raise InvalidArgument(f"n_cells must be >= 2, got {self.n_cells}")
        if values.shape != (self.n_cells + 1,):
            raise InvalidArgument(
                f"expected {self.n_cells + 1} values, got shape {values.shape}")
        if values[0] != 0.0 or values[-1] != 0.0:
            raise InvalidExcursion("excursion must vanish at both endpoints")
        bad = np.flatnonzero(~(values >= 0.0))
        if bad.size:
            i = int(bad[0])
            raise InvalidExcursion(f"negative or NaN value {values[i]!r} at index {i}", index=i)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def times(self):
        return np.arange(self.n_cells + 1) / self.n_cells

    def __len__(self):
        return self.n_cells + 1

    def __repr__(self):
        return f"ExcursionGrid(n_cells={self.n_cells}, provenance={self.provenance!r})"


@dataclass(frozen=True)
class ZigZagParams:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidArgument(f"zig-zag order must be a positive integer, got {self.n}")


# -- Brownian excursions --------------------------------------------------

def sample_wiener(n_cells, seed):
    """Wiener path at ``t_i = i / n_cells``.

    Increment ``i`` is ``normals(seed, i, STREAM_WIENER) / sqrt(n_cells)`` (see
    :mod:`starry.rng`), so the output is a pure function of ``(n_cells, seed)``.
    """
    n_cells = int(n_cells)
    if n_cells < 2:
        raise InvalidArgument(f"n_cells must be >= 2, got {n_cells}")
    steps = normals(seed, np.arange(n_cells, dtype=np.uint64), STREAM_WIENER)
    w = np.empty(n_cells + 1)
    w[0] = 0.0
    np.cumsum(steps / math.sqrt(n_cells), out=w[1:])
    return w


def bridge_from_wiener(w):
    """``B(t) = W(t) - t W(1)`` on the grid."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size < 3:
        raise InvalidArgument("need a 1-d path with at least 3 samples")
    if w[0] != 0.0:
        raise InvalidArgument("Wiener path must start at 0")
    n = w.size - 1
    b = w - (np.arange(n + 1) / n) * w[n]
    b[n] = 0.0
    return b


def vervaat_excursion(b, provenance="brownian"):
    """Cut a bridge at its (first) minimum and rotate so the cut sits at 0 and 1."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1 or b.size < 3:
        raise InvalidArgument("need a 1-d bridge with at least 3 samples")
    if b[0] != 0.0 or b[-1] != 0.0:
        raise InvalidArgument("bridge must vanish at both endpoints")
    n = b.size - 1
    i_min = int(np.argmin(b))
    idx = (np.arange(n + 1) + i_min) % n
    ex = b[idx] - b[i_min]
    return ExcursionGrid(n, ex, provenance)


def brownian_excursion(n_cells, seed):
    w = sample_wiener(n_cells, seed)
    return vervaat_excursion(bridge_from_wiener(w), provenance=f"brownian:{int(seed)}")


# -- zig-zag F_n ------------------------------------------------------------

def _order(p):
    return p.n if isinstance(p, ZigZagParams) else ZigZagParams(int(p)).n


def zigzag_eval(p, x):
    """Evaluate F_n at ``x`` in [0, 1].

    Peaks of height 1 sit at ``(2k+1)/(2n)`` and valleys of height 1/2 at
    ``(k+1)/n``. Works with floats and with :class:`fractions.Fraction`
    (exact result).
    """
    n = _order(p)
    if not 0 <= x <= 1:
        raise InvalidArgument(f"x must lie in [0, 1], got {x!r}")
    half = Fraction(1, 2) if isinstance(x, Fraction) else 0.5
    if 2 * n * x < 1:
        return 2 * n * x
    if 2 * n * x >= 2 * n - 1:
        return -2 * n * x + 2 * n
    j = math.floor(2 * n * x)
    if j % 2:
        k = (j - 1) // 2
        return -n * x + (2 * k + 3) * half
    k = j // 2 - 1
    return n * x - k - half


def zigzag_values(p, xs):
    """Vectorised :func:`zigzag_eval` over an array of points."""
    n = _order(p)
    xs = np.asarray(xs, dtype=np.float64)
    if np.any((xs < 0) | (xs > 1)):
        raise InvalidArgument("all points must lie in [0, 1]")
    u = 2 * n * xs
    j = np.floor(u)
    k_down = (j - 1) // 2
    k_up = j // 2 - 1
    mid = np.where(j % 2 == 1, -n * xs + (2 * k_down + 3) / 2, n * xs - k_up - 0.5)
    out = np.where(u < 1, u, np.where(u >= 2 * n - 1, -2 * n * xs + 2 * n, mid))
    return out


def zigzag_grid(n, n_cells):
    """F_n sampled at ``i / n_cells``."""
    xs = np.arange(n_cells + 1) / n_cells
    values = zigzag_values(n, xs)
    values[0] = values[-1] = 0.0
    return ExcursionGrid(int(n_cells), values, provenance=f"zigzag:{_order(n)}")


# -- excursion with bi-Lipschitz graph --------------------------------------

def _interval(k):
    a = Fraction(1, 2) - Fraction(1, 2 ** (k + 1))
    return a, a + Fraction(1, 2 ** (k + 3))


def _triangle(x_frac, K):
    """Triangle wave on [0, 1] with slope 2 and ``K`` peaks, exact."""
    if x_frac >= 1:
        return Fraction(0)
    y = x_frac * K
    k = math.floor(y)
    r = y - k
    return 2 * r / K if r < Fraction(1, 2) else 2 * (1 - r) / K


def _g1(x, n_max):
    covered = Fraction(0)
    for k in range(1, n_max + 1):
        a, b = _interval(k)
        if x <= a:
            break
        covered += min(x, b) - a
    return x - covered


def example51_eval(x, n_max=20):
    """``g(x) + s(x)`` with the interval series truncated after ``n_max`` terms.

    Exact rational arithmetic is used internally (the triangle waves on
    ``[a_n, b_n]`` have ``(n+1)**n`` peaks); the result is a float unless
    ``x`` is a Fraction.
    """
    if not 0 <= x <= 1:
        raise InvalidArgument(f"x must lie in [0, 1], got {x!r}")
    exact = isinstance(x, Fraction)
    xf = Fraction(x)
    half = Fraction(1, 2)
    if xf < half:
        g = _g1(xf, n_max)
    else:
        g1_half = _g1(half, n_max)
        g = -2 * g1_half * xf + 2 * g1_half
    s = Fraction(0)
    if xf < half:
        for k in range(1, n_max + 1):
            a, b = _interval(k)
            if xf < a:
                break
            if xf <= b:
                s = (b - a) * _triangle((xf - a) / (b - a), (k + 1) ** k)
                break
    out = g + s
    return out if exact else float(out)


def example51_grid(n_cells, n_max=20):
    return grid_from_function(lambda t: example51_eval(t, n_max), n_cells,
                              provenance="example51")


# -- generic -----------------------------------------------------------------

def grid_from_function(f, n_cells, provenance="function"):
    """Sample ``f`` at ``i / n_cells``; tiny endpoint values are clamped to 0."""
    n_cells = int(n_cells)
    if n_cells < 2:
        raise InvalidArgument(f"n_cells must be >= 2, got {n_cells}")
    values = np.array([float(f(i / n_cells)) for i in range(n_cells + 1)])
    for end in (0, n_cells):
        if abs(values[end]) >= 1e-12:
            raise InvalidExcursion(
                f"f must vanish at the endpoints, got {values[end]!r} at index {end}", index=end)
        values[end] = 0.0
    neg = np.flatnonzero(~(values >= 0.0))
    if neg.size:
        i = int(neg[0])
        raise InvalidExcursion(f"negative sample {values[i]!r} at index {i}", index=i)
    return ExcursionGrid(n_cells, values, provenance)


def planted_zigzag(n, n_cells, start, cells, base=0.5):
    """Excursion carrying an exact copy of ``sqrt(delta) * F_n`` on one window.

    The window covers grid indices ``start..start + cells`` (``delta = cells /
    n_cells``) and sits on a plateau of height ``base``, reached by linear ramps
    from both endpoints.
    """
    end = start + cells
    if not (0 < start and end < n_cells):
        raise InvalidArgument("window must lie strictly inside the grid")
    values = np.empty(n_cells + 1)
    values[: start + 1] = base * np.arange(start + 1) / start
    tail = n_cells - end
    values[end:] = base * (tail - np.arange(tail + 1)) / tail
    scale = math.sqrt(cells / n_cells)
    values[start: end + 1] = base + scale * zigzag_values(n, np.arange(cells + 1) / cells)
    return ExcursionGrid(int(n_cells), values, provenance=f"planted:{_order(n)}")
