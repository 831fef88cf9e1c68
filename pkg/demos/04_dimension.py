"""
Covering numbers and Assouad estimates
======================================

On an interval the covering exponent settles near 1. On the countable
space where level n has n points at mutual distance 2^-n, the exponent
at ratio 2 keeps growing with n.
"""

import numpy as np

from starry.dimension import (CounterexampleSpace, assouad_estimate,
                              counterexample_distance, covering_number, doubling_probe)
from starry.spaces import EuclideanPoints

line = EuclideanPoints(np.linspace(0, 1, 2048))
pairs = [(R, R / q) for R in (0.05, 0.1, 0.2, 0.4) for q in (4, 8, 16, 64, 256)]
rep = assouad_estimate(range(2048), line, pairs, max_centers=32)
print(f"interval: fitted exponent {rep.fitted_alpha:.3f}, C = {rep.fitted_C:.2f}")
print("interval: worst half-radius cover", doubling_probe(range(2048), line, 20))

print("d((3,1),(3,2)) =", counterexample_distance((3, 1), (3, 2), exact=True))
print("d((3,5),(3,1)) =", counterexample_distance((3, 5), (3, 1), exact=True))
print("d((2,1),(4,7)) =", counterexample_distance((2, 1), (4, 7), exact=True))

space = CounterexampleSpace(32)
pts = range(len(space))
for n in (4, 8, 12):
    c = space.index(n, 1)
    print(f"B(({n},1), 2^-{n}) needs", covering_number(pts, space, c, 2.0 ** -n, 2.0 ** -(n + 1)),
          "sets of half the size")

scales = [(2.0 ** -n, 2.0 ** -(n + 1)) for n in range(8, 25)]
rep = assouad_estimate(pts, space, scales, centers=pts)
print("per-scale exponents:", np.round(rep.exponents, 2))
print("growth flagged:", rep.nonconvergent)
