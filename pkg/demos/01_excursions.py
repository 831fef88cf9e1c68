"""
Excursions on a grid
====================

Three ways to get an excursion: a Brownian path cut at its minimum, the
zig-zag F_n, and the low-dimensional-graph example built from g + s.
SVG drawings land in ./demo_output.
"""

from pathlib import Path

import numpy as np

from starry.excursion import (bridge_from_wiener, brownian_excursion, example51_grid,
                              sample_wiener, vervaat_excursion, zigzag_grid)
from starry.plotting import plot_excursion, write_svg

out = Path("demo_output")
out.mkdir(exist_ok=True)

# A Wiener path with 2^12 steps, pinned into a bridge, then rotated so the
# minimum sits at both ends.
w = sample_wiener(4096, seed=3)
b = bridge_from_wiener(w)
ex = vervaat_excursion(b)
print("W(1) =", w[-1], " bridge end =", b[-1], " excursion min =", ex.values.min())

# brownian_excursion does the same three steps in one call.
assert np.array_equal(brownian_excursion(4096, 3).values, ex.values)
write_svg(out / "brownian.svg", plot_excursion(ex, title="Brownian excursion, seed 3"))

# F_4: peaks of height 1 at odd multiples of 1/8, valleys of 1/2 in between.
f4 = zigzag_grid(4, 64)
print("F_4 at t = 1/8, 1/4:", f4.values[8], f4.values[16])
write_svg(out / "zigzag4.svg", plot_excursion(f4))

# g + s rises with slope 1 except on short flat stretches that carry
# increasingly dense triangle waves, then falls linearly.
g = example51_grid(2048)
print("g + s at 1/4, 1/2, 3/4:", g.values[512], g.values[1024], g.values[1536])
write_svg(out / "example51.svg", plot_excursion(g))
