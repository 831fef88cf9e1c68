"""Covering numbers, Assouad-dimension probes and quasisymmetric obstructions."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math
import numbers

import numpy as np

from .errors import InvalidArgument, InvalidProfile
from .rng import STREAM_CENTERS, uniforms
from .spaces import as_metric


# -- covering ----------------------------------------------------------------

def _ball(metric, points, center, radius):
    d = np.asarray(metric.distances([center], points), dtype=np.float64)[0]
    return points[d <= radius]


def _greedy_cover_matrix(d, radius):
    """Greedy set cover of the points behind distance matrix ``d`` by closed balls.

    Each round picks the uncovered point whose ball covers the most uncovered
    points (smallest index on ties). Gains are updated incrementally.
    """
    if d.shape[0] == 0:
        return 0
    adj = d <= radius
    gain = adj.sum(axis=1).astype(np.int64)
    uncovered = np.ones(d.shape[0], dtype=bool)
    count = 0
    while uncovered.any():
        masked = np.where(uncovered, gain, -1)
        best = int(np.argmax(masked))
        newly = adj[best] & uncovered
        uncovered &= ~newly
        gain -= adj[:, newly].sum(axis=1)
        count += 1
    return count


def _greedy_cover(metric, members, radius):
    if members.size == 0:
        return 0
    return _greedy_cover_matrix(np.asarray(metric.distances(members, members)), radius)


def covering_number(points, metric, center, R, r):
    """Greedy count of radius-``r/2`` balls needed to cover ``B(center, R)``.

    A ball of radius r/2 has diameter at most r, so the count is at least the
    minimal number of diameter-r sets and at most the minimal number of
    diameter-r/2 sets (up to the greedy factor).
    """
    if not 0 < r < R:
        raise InvalidArgument(f"need 0 < r < R, got r={r}, R={R}")
    metric = as_metric(metric)
    points = np.asarray(points, dtype=np.int64)
    if points.size == 0:
        raise InvalidArgument("empty point set")
    return _greedy_cover(metric, _ball(metric, points, center, R), r / 2)


def _sample_centers(points, k, seed):
    if k is None or k >= points.size:
        return points
    order = np.argsort(uniforms(seed, np.arange(points.size, dtype=np.uint64), STREAM_CENTERS),
                       kind="stable")
    return np.sort(points[order[:k]])


@dataclass
class AssouadReport:
    samples: list                 # (center, R, r, N)
    per_pair: list                # (R, r, sup N, log N / log(R/r))
    fitted_alpha: float
    fitted_C: float
    nonconvergent: bool = False
    fit_degenerate: bool = False
    notes: list = field(default_factory=list)

    @property
    def exponents(self):
        return [e for *_, e in self.per_pair]

    def rows(self):
        """``(center, R, r, N, exponent)`` for CSV output."""
        return [(c, R, r, N, math.log(N) / math.log(R / r)) for c, R, r, N in self.samples]


def _growth(per_pair, threshold=0.25, min_scales=3):
    groups = {}
    for R, r, N, e in per_pair:
        groups.setdefault(round(math.log(R / r), 9), []).append((r, e))
    for seq in groups.values():
        if len(seq) < min_scales:
            continue
        seq.sort(key=lambda t: -t[0])
        third = max(1, len(seq) // 3)
        coarse = np.mean([e for _, e in seq[:third]])
        fine = np.mean([e for _, e in seq[-third:]])
        if fine - coarse > threshold:
            return True
    return False


def assouad_estimate(points, metric, scale_pairs, centers=None, max_centers=64, seed=0):
    """Sup-slope estimate of the Assouad exponent from greedy covering numbers.

    For every ``(R, r)`` the covering number is maximised over the sampled
    centers. ``log C`` comes from a least-squares fit of ``log N`` against
    ``log(R/r)``; the reported exponent is the largest per-pair slope
    ``(log N - log C) / log(R/r)``. When the ratios do not reach two decades
    (``max R/r < 100``) or are all equal, the fit is skipped and ``C = 1``.

    ``nonconvergent`` is set when, at a fixed ratio ``R/r``, the raw per-pair
    exponent at the finest scales exceeds the coarsest ones by more than 0.25.
    """
    pairs = [(float(R), float(r)) for R, r in scale_pairs]
    if len(pairs) < 10:
        raise InvalidArgument(f"need at least 10 scale pairs, got {len(pairs)}")
    for R, r in pairs:
        if not 0 < r < R:
            raise InvalidArgument(f"need 0 < r < R, got r={r}, R={R}")
    metric = as_metric(metric)
    points = np.asarray(points, dtype=np.int64)
    if points.size == 0:
        raise InvalidArgument("empty point set")
    centers = (_sample_centers(points, max_centers, seed) if centers is None
               else np.asarray(centers, dtype=np.int64))

    samples, per_pair = [], []
    best = {}
    for R in sorted({R for R, _ in pairs}):
        radii = [r for R2, r in pairs if R2 == R]
        for c in centers.tolist():
            members = _ball(metric, points, c, R)
            d = np.asarray(metric.distances(members, members))
            for r in radii:
                N = _greedy_cover_matrix(d, r / 2)
                samples.append((c, R, r, N))
                best[(R, r)] = max(best.get((R, r), 0), N)
    samples.sort(key=lambda s: (pairs.index((s[1], s[2])), s[0]))
    for R, r in pairs:
        N = best[(R, r)]
        per_pair.append((R, r, N, math.log(N) / math.log(R / r)))

    x = np.array([math.log(R / r) for R, r, _, _ in per_pair])
    y = np.array([math.log(N) for _, _, N, _ in per_pair])
    degenerate = x.max() < math.log(100) or np.ptp(x) == 0
    if degenerate:
        log_c = 0.0
    else:
        _, log_c = np.polyfit(x, y, 1)
    alpha = max(0.0, float(np.max((y - log_c) / x)))
    return AssouadReport(samples, per_pair, alpha, math.exp(log_c),
                         nonconvergent=_growth(per_pair), fit_degenerate=bool(degenerate))


def doubling_probe(points, metric, trials, seed=0, max_radii=32):
    """Largest greedy count of radius-r/2 balls covering some ``B(x, r)``.

    ``trials`` centers are drawn without replacement; each is probed at up to
    ``max_radii`` of its distinct positive distances.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    metric = as_metric(metric)
    points = np.asarray(points, dtype=np.int64)
    worst = 1
    for c in _sample_centers(points, trials, seed).tolist():
        d = np.asarray(metric.distances([c], points), dtype=np.float64)[0]
        radii = np.unique(d[d > 0])
        if radii.size > max_radii:
            radii = radii[np.linspace(0, radii.size - 1, max_radii).astype(int)]
        for r in radii.tolist():
            worst = max(worst, _greedy_cover(metric, points[d <= r], r / 2))
    return worst


# -- countable counterexample ----------------------------------------------------

@dataclass(frozen=True, order=True)
class CounterexamplePoint:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidArgument(f"need n, m >= 1, got ({self.n}, {self.m})")


@lru_cache(maxsize=None)
def _inv_square_prefix(k):
    """Exact ``sum_{j=1}^{k} j**-2``."""
    return sum((Fraction(1, j * j) for j in range(1, k + 1)), Fraction(0))


def counterexample_distance(p, q, exact=False):
    """Pseudometric on pairs ``(n, m)``; points with ``m > n`` collapse onto ``(n, 1)``."""
    n, m = p
    n2, m2 = q
    if n == n2:
        lo, hi = min(m, m2), max(m, m2)
        if m == m2 or (lo == 1 and hi > n) or lo > n:
            d = Fraction(0)
        else:
            d = Fraction(1, 2 ** n)
    else:
        a, b = min(n, n2), max(n, n2)
        d = 2 * (_inv_square_prefix(b) - _inv_square_prefix(a - 1))
    return d if exact else float(d)


class CounterexampleSpace:
    """Truncation ``1 <= n <= n_max``, ``1 <= m <= m_max`` of the countable space.

    ``m_max`` defaults to ``n_max + 1`` so that every level contains at least one
    point identified with its root ``(n, 1)``.
    """

    def __init__(self, n_max=24, m_max=None):
        if n_max < 1:
            raise InvalidArgument("n_max must be >= 1")
        self.n_max = int(n_max)
        self.m_max = int(m_max) if m_max is not None else self.n_max + 1
        self.points = [CounterexamplePoint(n, m)
                       for n in range(1, self.n_max + 1) for m in range(1, self.m_max + 1)]
        nn = np.array([p.n for p in self.points])
        mm = np.array([p.m for p in self.points])
        prefix = np.array([float(_inv_square_prefix(k)) for k in range(self.n_max + 1)])
        a = np.minimum.outer(nn, nn)
        b = np.maximum.outer(nn, nn)
        cross = 2 * (prefix[b] - prefix[a - 1])
        lo = np.minimum.outer(mm, mm)
        hi = np.maximum.outer(mm, mm)
        same_level = nn[:, None] == nn[None, :]
        zero = (mm[:, None] == mm[None, :]) | ((lo == 1) & (hi > nn[:, None])) | (lo > nn[:, None])
        d = np.where(same_level, np.where(zero, 0.0, 2.0 ** -nn[:, None].astype(float)), cross)
        # exact values for the cross-level sums
        for i in range(1, self.n_max + 1):
            for j in range(i + 1, self.n_max + 1):
                v = counterexample_distance((i, 1), (j, 1))
                d[np.ix_(nn == i, nn == j)] = v
                d[np.ix_(nn == j, nn == i)] = v
        d.setflags(write=False)
        self.matrix = d

    def __len__(self):
        return len(self.points)

    def index(self, n, m):
        if not (1 <= n <= self.n_max and 1 <= m <= self.m_max):
            raise InvalidArgument(f"({n}, {m}) is outside the truncation")
        return (n - 1) * self.m_max + (m - 1)

    def distance(self, i, j):
        return float(self.matrix[i, j])

    def distances(self, a, b):
        return self.matrix[np.ix_(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))]


# -- quasisymmetric obstruction ----------------------------------------------------

class QSProfile:
    """Increasing distortion gauge ``psi: (0, inf) -> (0, inf)``.

    Either a callable or a table ``(xs, ys)`` interpolated linearly (and held
    constant outside the table).
    """

    def __init__(self, psi=None, table=None, name="custom"):
        if (psi is None) == (table is None):
            raise InvalidArgument("give exactly one of psi or table")
        self.name = name
        if table is not None:
            xs, ys = (np.asarray(v, dtype=np.float64) for v in table)
            if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 2:
                raise InvalidArgument("table needs two equal-length 1-d arrays")
            if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) < 0) or np.any(ys <= 0):
                raise InvalidProfile("tabulated profile must be positive and nondecreasing")
            self._psi = lambda t: float(np.interp(float(t), xs, ys))
        else:
            self._psi = psi

    def __call__(self, t):
        return self._psi(t)

    @classmethod
    def linear(cls):
        return cls(lambda t: t, name="linear")

    @classmethod
    def power(cls, alpha):
        try:
            alpha = float(alpha)
        except ValueError:
            raise InvalidProfile(f"bad power exponent {alpha!r}") from None
        if not alpha > 0:
            raise InvalidProfile("power profile needs a positive exponent")
        return cls(lambda t: float(t) ** alpha, name=f"power:{alpha:g}")

    @classmethod
    def parse(cls, text):
        """``"linear"`` or ``"power:ALPHA"``."""
        if text == "linear":
            return cls.linear()
        if text.startswith("power:"):
            return cls.power(text.split(":", 1)[1])
        raise InvalidArgument(f"unknown profile {text!r}")


@dataclass(frozen=True)
class Verdict:
    verdict: str                 # "CONTRADICTS" or "INSUFFICIENT"
    n: int
    threshold: object            # Fraction when all inputs are exact
    psi1: object
    psi1eta: object
    C: object
    s: object
    required_n: int

    def to_dict(self):
        def num(v):
            return float(v) if isinstance(v, Fraction) else v
        out = {"verdict": self.verdict, "n": self.n, "threshold": num(self.threshold),
               "psi1": num(self.psi1), "psi1eta": num(self.psi1eta),
               "C": num(self.C), "s": num(self.s), "required_n": self.required_n}
        if isinstance(self.threshold, Fraction):
            out["threshold_exact"] = str(self.threshold)
        return out


def _as_exact(v):
    if isinstance(v, (Fraction, numbers.Integral)):
        return Fraction(v)
    return v


def qs_obstruction(star, psi, c, s):
    """Does an n-star rule out a ``(c, s)`` Assouad bound for every psi-quasisymmetric image?

    The image of the star needs at least ``n`` balls at ratio
    ``R/r = 4 psi(1) psi(1 + eta)``, so a bound ``N <= c (R/r)**s`` fails once
    ``n > c (4 psi(1) psi(1 + eta))**s``. Rational inputs give an exact threshold.
    """
    if not c > 0:
        raise InvalidArgument(f"need c > 0, got {c}")
    if not s >= 0:
        raise InvalidArgument(f"need s >= 0, got {s}")
    psi = psi if isinstance(psi, QSProfile) else QSProfile(psi)
    eta = _as_exact(star.eta)
    p1 = psi(_as_exact(1))
    p1e = psi(1 + eta)
    if not (p1 > 0 and p1e > 0):
        raise InvalidProfile("profile must be positive")
    if p1e < p1:
        raise InvalidProfile(f"profile decreases between 1 and 1 + eta: {p1} > {p1e}")
    c = _as_exact(c)
    s_exact = _as_exact(s)
    base = 4 * p1 * p1e
    if isinstance(s_exact, Fraction) and s_exact.denominator == 1 and isinstance(base, Fraction):
        threshold = c * base ** int(s_exact)
    else:
        threshold = float(c) * float(base) ** float(s)
    n = star.n
    required = math.floor(threshold) + 1
    verdict = "CONTRADICTS" if n > threshold else "INSUFFICIENT"
    return Verdict(verdict, n, threshold, p1, p1e, c, s_exact, required)
