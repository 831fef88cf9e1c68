"""
Approximate n-stars from zig-zag windows
========================================

Where a path follows a rescaled F_n, the first valley and the peaks form an
approximate n-star in the tree. With suitable labels the same points give a
star in the map metric. A large enough star rules out small Assouad bounds
for every quasisymmetric image.
"""

import math

from starry.dimension import QSProfile, qs_obstruction
from starry.excursion import planted_zigzag
from starry.snake import SnakeLabels, map_metric
from starry.stars import (map_star_from_window, map_star_points, scan_windows,
                          star_from_window, star_parameters)

for n in (6, 8, 10, 12):
    a, eta = star_parameters(n, exact=True)
    print(f"n = {n:2d}: A_n = {a}, eta_n = {eta}")

n, cells = 8, 512
g = planted_zigzag(n, 4096, cells, cells)
wm = scan_windows(g, n, [cells])[0]
print("window", wm.s_idx, "..", wm.t_idx, "tol", wm.tol)

cert = star_from_window(g, wm)
root = math.sqrt(wm.delta)
print("tree star: centre distances / sqrt(delta) =", cert.center_distances / root)
print("           pair distances / sqrt(delta) =", cert.pair_distances[0, 1:] / root)

# Labels equal to the heights make every label distance twice a tree height gap.
sl = SnakeLabels(g, g.values, seed=0)
mm = map_metric(sl, 64, include=map_star_points(g, wm).all)
mcert = map_star_from_window(g, sl, mm, wm)
print("map star: a =", round(mcert.a, 4), " eta =", round(mcert.eta, 4))

for s in (0.5, 1, 2):
    v = qs_obstruction(cert, QSProfile.linear(), 1, s)
    print(f"linear distortion, C = 1, s = {s}: threshold {float(v.threshold):.2f} -> {v.verdict}")
