"""Plain SVG rendering of excursions, with an optional star overlay."""

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT, MARGIN = 800, 320, 30


def _envelope(values, columns):
    """Min/max per pixel column so large grids stay small and keep their extremes."""
    n = values.size - 1
    if n <= 4 * columns:
        return np.arange(n + 1) / n, values
    edges = (np.arange(columns + 1) * n) // columns
    ts, fs = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        seg = values[lo: hi + 1]
        a, b = lo + int(np.argmin(seg)), lo + int(np.argmax(seg))
        for k in sorted({a, b}):
            ts.append(k / n)
            fs.append(values[k])
    return np.array(ts), np.array(fs)


def plot_excursion(grid, star=None, window=None, title=None):
    """SVG document for ``grid``; ``star`` marks center/satellites, ``window`` shades a WindowMatch."""
    values = np.asarray(grid.values, dtype=np.float64)
    top = float(values.max()) or 1.0
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def x(t):
        return MARGIN + pw * t

    def y(v):
        return HEIGHT - MARGIN - ph * v / top

    ts, fs = _envelope(values, pw)
    pts = " ".join(f"{x(t):.3f},{y(v):.3f}" for t, v in zip(ts.tolist(), fs.tolist()))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<title>{escape(title or grid.provenance)}</title>',
        f'<line x1="{MARGIN}" y1="{y(0):.3f}" x2="{WIDTH - MARGIN}" y2="{y(0):.3f}" '
        'stroke="#999" stroke-width="1"/>',
    ]
    n = grid.n_cells
    if window is not None:
        x0, x1 = x(window.s_idx / n), x(window.t_idx / n)
        out.append(f'<rect class="window" x="{x0:.3f}" y="{MARGIN}" width="{x1 - x0:.3f}" '
                   f'height="{ph}" fill="#fe9" fill-opacity="0.5"/>')
    out.append(f'<polyline class="excursion" fill="none" stroke="#124" stroke-width="1" '
               f'points="{pts}"/>')
    if star is not None:
        for s in star.satellites:
            out.append(f'<circle class="satellite" cx="{x(s / n):.3f}" cy="{y(values[s]):.3f}" '
                       'r="3" fill="#16c"/>')
        c = star.center
        out.append(f'<circle class="center" cx="{x(c / n):.3f}" cy="{y(values[c]):.3f}" '
                   'r="4" fill="#d22"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, document):
    with open(path, "w", newline="") as fh:
        fh.write(document)
