"""Independent reference computations used by the test suite.

Everything here is written from the definitions with plain loops or
exact arithmetic and shares no code with the package.
"""

from fractions import Fraction
import itertools

import numpy as np


def interval_min(values, i, j):
    lo, hi = min(i, j), max(i, j)
    return min(values[lo: hi + 1])


def interval_min_table(values):
    """``out[i, j] = min(values[min(i, j) .. max(i, j)])`` by a running scan from each i."""
    v = np.asarray(values, dtype=np.float64)
    out = np.empty((v.size, v.size))
    for i in range(v.size):
        run = np.minimum.accumulate(v[i:])
        out[i, i:] = run
        out[i:, i] = run
    return out


def tree_dist(values, i, j):
    return values[i] + values[j] - 2 * interval_min(values, i, j)


def tree_dist_matrix(values):
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    out = np.empty((n, n))
    for i in range(n):
        run = np.minimum.accumulate(v[i:])
        out[i, i:] = v[i] + v[i:] - 2 * run
        out[i:, i] = out[i, i:]
    return out


def cyclic_indices(a, b, n_cells):
    """Indices of [a, b] on the circle 0..n_cells with 0 and n_cells identified."""
    a, b = a % n_cells, b % n_cells
    if a <= b:
        return list(range(a, b + 1))
    return list(range(a, n_cells + 1)) + list(range(0, b + 1))


def d_circ(z, i, j):
    n = len(z) - 1
    m1 = min(z[k] for k in cyclic_indices(i, j, n))
    m2 = min(z[k] for k in cyclic_indices(j, i, n))
    return z[i] + z[j] - 2 * max(m1, m2)


def floyd_warshall(d):
    d = [list(row) for row in d]
    n = len(d)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return np.array(d)


def zigzag_nodes(n):
    """Breakpoints of F_n: up to 1, alternate 1/2 and 1, down to 0."""
    xs = [Fraction(k, 2 * n) for k in range(2 * n + 1)]
    ys = [Fraction(0)] + [Fraction(1) if k % 2 else Fraction(1, 2) for k in range(1, 2 * n)] + [Fraction(0)]
    return xs, ys


def zigzag_interp(n, x):
    """F_n at ``x`` by linear interpolation between breakpoints (exact for Fractions)."""
    xs, ys = zigzag_nodes(n)
    for k in range(len(xs) - 1):
        if xs[k] <= x <= xs[k + 1]:
            w = (x - xs[k]) / (xs[k + 1] - xs[k])
            return ys[k] + w * (ys[k + 1] - ys[k])
    raise ValueError(x)


def min_interval_cover(positions, diameter):
    """Minimal number of sets of diameter <= ``diameter`` covering points on a line."""
    pts = sorted(positions)
    count, i = 0, 0
    while i < len(pts):
        start = pts[i]
        count += 1
        while i < len(pts) and pts[i] - start <= diameter:
            i += 1
    return count


def counterexample_d(p, q):
    """Five-case pseudometric written out case by case in exact arithmetic."""
    (n, m), (n2, m2) = p, q
    if n != n2:
        lo, hi = min(n, n2), max(n, n2)
        return 2 * sum(Fraction(1, k * k) for k in range(lo, hi + 1))
    if m == m2:
        return Fraction(0)
    if min(m, m2) > n:
        return Fraction(0)
    if min(m, m2) == 1 and max(m, m2) > n:
        return Fraction(0)
    return Fraction(1, 2 ** n)


def star_holds(cd, pd, a, eta, rho):
    """All star inequalities by explicit loops."""
    n = len(cd)
    for i in range(n):
        if not rho <= cd[i] <= (1 + eta) * rho:
            return False
        for j in range(n):
            if i != j and not (a - eta) * rho <= pd[i][j] <= a * rho:
                return False
    return True


def all_triples(n):
    return itertools.product(range(n), repeat=3)
