"""
Tree distances, labels and the map pseudometric
===============================================

The excursion defines a tree distance d_f through interval minima. Gaussian
labels indexed by that tree define the label distance D°, and chains of
sample points give the upper approximation d_map of the map distance.
"""

import numpy as np

from starry.excursion import brownian_excursion, zigzag_grid
from starry.snake import check_bounds, map_metric, simulate_labels, simulate_labels_batch
from starry.treemetric import TreeMetric

tm = TreeMetric(zigzag_grid(4, 16))
print("d(1/16, 1/8) on F_4:", tm.dist(1, 2))          # 1/2 + 1 - 2 * 1/2
print("leaves of F_4 on 8 cells:", TreeMetric(zigzag_grid(4, 8)).leaves())
print("root identified with t = 1:", tm.is_equivalent(0, 16))

# Labels: Cov(z_i, z_j) is the interval minimum of the excursion.
tm64 = TreeMetric(zigzag_grid(4, 64))
z = simulate_labels_batch(tm64, range(20_000))
print("empirical Cov(z_8, z_24) =", np.mean(z[:, 8] * z[:, 24]),
      " target =", tm64.interval_min(8, 24))

# The map metric on a Brownian tree.
tm = TreeMetric(brownian_excursion(4096, 1))
sl = simulate_labels(tm, seed=1)
for m in (16, 64, 256):
    mm = map_metric(sl, m)
    gap = mm.d_circ - mm.d_map
    print(f"m = {m:3d}: pairs shortened by chains {np.mean(gap > 1e-12):.2%}, largest gain {gap.max():.2e}")

rep = check_bounds(sl, tm, map_metric(sl, 256))
print("upper-bound violations:", rep.upper_violations)
print("pairs under the ancestor-label bound:", rep.lca_negative, "of", len(rep.pairs))
print("pairs under the label-difference bound:", rep.label_negative)
