"""Command-line front end.

Exit status: 0 success, 1 invalid arguments, 2 invalid input file, 3 internal error.
"""

import argparse
import csv
from dataclasses import dataclass, field
from fractions import Fraction
import math
import sys

import numpy as np

from . import io
from .dimension import (CounterexampleSpace, QSProfile, assouad_estimate,
                        counterexample_distance, qs_obstruction)
from .errors import InvalidArgument, InvalidInputFile, StarryError
from .excursion import brownian_excursion, example51_grid, zigzag_grid
from .plotting import plot_excursion, write_svg
from .snake import STRATEGIES, map_metric, simulate_labels
from .stars import (dyadic_lengths, map_star_from_window, map_star_points, scan_windows,
                    star_from_window)
from .treemetric import TreeMetric

EXIT_OK, EXIT_ARGS, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def _is_pow2(n):
    return n >= 1 and n & (n - 1) == 0


@dataclass
class RunConfig:
    subcommand: str
    grid_n: int = 65536
    seed: int = 0
    subset_m: int = 512
    n_star_range: tuple = (6, 10)
    inp: str = None
    out: str = None
    plot: bool = False
    threads: int = 1
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.grid_n < 16 or not _is_pow2(self.grid_n):
            raise InvalidArgument(f"--grid must be a power of two >= 16, got {self.grid_n}")
        if not 2 <= self.subset_m <= self.grid_n:
            raise InvalidArgument(f"--subset must lie in [2, grid], got {self.subset_m}")
        lo, hi = self.n_star_range
        if not 2 <= lo <= hi:
            raise InvalidArgument(f"need 2 <= n-min <= n-max, got {lo}, {hi}")
        if self.threads < 1:
            raise InvalidArgument("--threads must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidArgument("--seed must be a 64-bit unsigned integer")
        return self


def _load_grid(path):
    grid = io.read_excursion(path)
    if grid.n_cells < 16 or not _is_pow2(grid.n_cells):
        raise InvalidInputFile(f"{path}: grid has {grid.n_cells} cells, need a power of two >= 16")
    return grid


def _svg_path(cfg):
    return (cfg.out.rsplit(".", 1)[0] if "." in cfg.out else cfg.out) + ".svg"


def _need(cfg, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise InvalidArgument(f"{cfg.subcommand} needs --{'in' if name == 'inp' else name}")


# -- subcommands ---------------------------------------------------------------------

def cmd_sample(cfg):
    _need(cfg, "out")
    kind = cfg.options["kind"]
    if kind == "brownian":
        grid = brownian_excursion(cfg.grid_n, cfg.seed)
    elif kind == "example51":
        grid = example51_grid(cfg.grid_n, cfg.options.get("n_max", 20))
    elif kind.startswith("zigzag:"):
        try:
            order = int(kind.split(":", 1)[1])
        except ValueError:
            raise InvalidArgument(f"bad zig-zag order in {kind!r}") from None
        grid = zigzag_grid(order, cfg.grid_n)
    else:
        raise InvalidArgument(f"unknown --kind {kind!r}")
    io.write_excursion(cfg.out, grid)
    if cfg.plot:
        write_svg(_svg_path(cfg), plot_excursion(grid))


def cmd_tree(cfg):
    _need(cfg, "inp", "out")
    grid = _load_grid(cfg.inp)
    tm = TreeMetric(grid)
    m = min(cfg.subset_m, grid.n_cells + 1)
    idx = np.unique((np.arange(m, dtype=np.int64) * grid.n_cells) // max(1, m - 1))
    io.write_tree_csv(cfg.out, tm, idx)
    if cfg.options.get("leaves"):
        io.write_leaves(cfg.options["leaves"], tm)


def cmd_map(cfg):
    _need(cfg, "inp", "out")
    grid = _load_grid(cfg.inp)
    if cfg.subset_m > grid.n_cells:
        raise InvalidArgument(f"--subset {cfg.subset_m} exceeds grid of {grid.n_cells}")
    sl = simulate_labels(TreeMetric(grid), cfg.seed)
    mm = map_metric(sl, cfg.subset_m, cfg.options.get("strategy", "stride"))
    io.write_map_csv(cfg.out, mm)


def find_stars(grid, n_range, metric="tree", seed=0, subset=512, threads=1):
    """Best star per n: windows ranked by (tol, start), first that verifies wins."""
    tm = TreeMetric(grid)
    sl = simulate_labels(tm, seed) if metric == "map" else None
    found = []
    top = int(math.log2(grid.n_cells))
    for n in range(n_range[0], n_range[1] + 1):
        lo = max(2, math.ceil(math.log2(4 * n)))
        if lo > top or n < 6:
            continue
        matches = scan_windows(grid, n, dyadic_lengths(lo, top), threads=threads)
        for wm in sorted(matches, key=lambda w: (w.tol, w.s_idx)):
            if metric == "tree":
                cert = star_from_window(grid, wm, tm)
            else:
                include = map_star_points(grid, wm).all
                m = min(grid.n_cells, max(subset, len(include)))
                cert = map_star_from_window(grid, sl, map_metric(sl, m, include=include), wm)
            if cert is not None:
                found.append((cert, wm))
                break
    return found


def cmd_stars(cfg):
    _need(cfg, "inp", "out")
    grid = _load_grid(cfg.inp)
    metric = cfg.options.get("metric", "tree")
    found = find_stars(grid, cfg.n_star_range, metric, cfg.seed, cfg.subset_m, cfg.threads)
    io.write_json(cfg.out, [io.star_to_dict(c, grid.n_cells) for c, _ in found])
    if cfg.plot:
        cert, wm = found[-1] if found else (None, None)
        write_svg(_svg_path(cfg), plot_excursion(grid, star=cert, window=wm))


def _parse_scales(text):
    pairs = []
    for item in text.split(","):
        try:
            R, r = (float(v) for v in item.split(":"))
        except ValueError:
            raise InvalidArgument(f"bad scale pair {item!r}; expected R:r") from None
        pairs.append((R, r))
    return pairs


def default_scales(metric, n):
    """Four outer radii below the diameter times five ratios between 4 and 256."""
    diam = float(np.max(metric.distances(np.arange(n), np.arange(n))))
    if diam <= 0:
        diam = 1.0
    return [(diam * 2.0 ** -k, diam * 2.0 ** -k / q) for k in (1, 2, 3, 4)
            for q in (4, 8, 16, 64, 256)]


def cmd_assouad(cfg):
    _need(cfg, "inp", "out")
    metric, labels = io.read_points(cfg.inp)
    n = len(metric)
    scales = cfg.options.get("scales")
    pairs = _parse_scales(scales) if scales else default_scales(metric, n)
    rep = assouad_estimate(np.arange(n), metric, pairs,
                           max_centers=cfg.options.get("centers", 64), seed=cfg.seed)
    io.write_assouad_csv(cfg.out, rep, labels)
    print(f"fitted_alpha={rep.fitted_alpha:.6g} fitted_C={rep.fitted_C:.6g} "
          f"nonconvergent={rep.nonconvergent} fit_degenerate={rep.fit_degenerate}")


def _number(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)
    except ValueError:
        raise InvalidArgument(f"not a number: {text!r}") from None


def cmd_obstruct(cfg):
    _need(cfg, "out")
    star_path = cfg.options.get("star")
    if star_path is None:
        raise InvalidArgument("obstruct needs --star")
    stars = io.read_stars(star_path)
    if not stars:
        raise InvalidInputFile(f"{star_path}: no star records")
    index = cfg.options.get("index")
    if index is None:
        star = max(stars, key=lambda s: s.n)
    elif 0 <= index < len(stars):
        star = stars[index]
    else:
        raise InvalidArgument(f"--index {index} out of range for {len(stars)} stars")
    verdict = qs_obstruction(star, QSProfile.parse(cfg.options["psi"]),
                             _number(cfg.options["C"]), _number(cfg.options["s"]))
    io.write_json(cfg.out, verdict.to_dict())
    print(verdict.verdict)


def cmd_example51(cfg):
    cfg.options["kind"] = "example51"
    cmd_sample(cfg)


def cmd_counterexample(cfg):
    _need(cfg, "out")
    space = CounterexampleSpace(cfg.options.get("n_max", 24), cfg.options.get("m_max"))
    pts = space.points
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "d", "n_i", "m_i", "n_j", "m_j"])
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                p, q = pts[a], pts[b]
                d = counterexample_distance((p.n, p.m), (q.n, q.m))
                w.writerow([a, b, repr(d), p.n, p.m, q.n, q.m])


COMMANDS = {
    "sample": cmd_sample, "tree": cmd_tree, "map": cmd_map, "stars": cmd_stars,
    "assouad": cmd_assouad, "obstruct": cmd_obstruct, "example51": cmd_example51,
    "counterexample": cmd_counterexample,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", type=int, default=65536)
    common.add_argument("--out")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--plot", action="store_true", help="also write an SVG next to --out")

    p = _Parser(prog="starry", description="Continuum trees, Brownian maps and n-stars.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", parents=[common], help="sample an excursion grid")
    s.add_argument("--kind", default="brownian", help="brownian | zigzag:N | example51")
    s.add_argument("--n-max", type=int, default=20, help="series truncation for example51")

    s = sub.add_parser("tree", parents=[common], help="tree distances between grid points")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--subset", type=int, default=512)
    s.add_argument("--leaves", help="also write the leaves (local maxima) CSV here")

    s = sub.add_parser("map", parents=[common], help="label and chain distances")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--subset", type=int, default=512)
    s.add_argument("--strategy", default="stride", choices=sorted(STRATEGIES))

    s = sub.add_parser("stars", parents=[common], help="extract n-star certificates")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--n-min", type=int, default=6)
    s.add_argument("--n-max", type=int, default=10)
    s.add_argument("--metric", choices=["tree", "map"], default="tree")
    s.add_argument("--subset", type=int, default=512)

    s = sub.add_parser("assouad", parents=[common], help="covering-number dimension estimate")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--scales", help="comma-separated R:r pairs (default: 20 pairs)")
    s.add_argument("--centers", type=int, default=64)

    s = sub.add_parser("obstruct", parents=[common], help="quasisymmetric obstruction verdict")
    s.add_argument("--star", required=True)
    s.add_argument("--index", type=int, help="record to use (default: largest n)")
    s.add_argument("--psi", default="linear", help="linear | power:ALPHA")
    s.add_argument("--C", default="1")
    s.add_argument("--s", default="2")

    s = sub.add_parser("example51", parents=[common], help="sample the bi-Lipschitz-graph excursion")
    s.add_argument("--n-max", type=int, default=20)

    s = sub.add_parser("counterexample", parents=[common], help="distance table of the countable space")
    s.add_argument("--n-max", type=int, default=24)
    s.add_argument("--m-max", type=int)
    return p


def config_from_args(ns):
    opts = {k: v for k, v in vars(ns).items()
            if k not in {"subcommand", "seed", "grid", "out", "threads", "plot", "inp",
                         "subset", "n_min"}}
    if "n_max" in opts and ns.subcommand == "stars":
        opts.pop("n_max")
    return RunConfig(
        subcommand=ns.subcommand, grid_n=ns.grid, seed=ns.seed,
        subset_m=getattr(ns, "subset", min(512, ns.grid)),
        n_star_range=(getattr(ns, "n_min", 6), getattr(ns, "n_max", 10))
        if ns.subcommand == "stars" else (6, 10),
        inp=getattr(ns, "inp", None), out=ns.out, plot=ns.plot, threads=ns.threads,
        options=opts,
    ).validate()


def run(cfg):
    COMMANDS[cfg.subcommand](cfg)
    return EXIT_OK


def main(argv=None):
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        return run(cfg)
    except _ArgError as exc:
        print(f"starry: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except InvalidInputFile as exc:
        print(f"starry: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidArgument as exc:
        print(f"starry: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except StarryError as exc:
        print(f"starry: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"starry: cannot write output: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except Exception as exc:  # invariant violation: always a bug
        print(f"starry: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
