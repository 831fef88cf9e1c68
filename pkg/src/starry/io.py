"""CSV and JSON formats for excursions, distance tables, stars and reports.

All writers are deterministic: fixed column order, ``\\n`` line endings,
round-trip float formatting and sorted JSON keys.
"""

import csv
from fractions import Fraction
import json

import numpy as np

from .errors import InvalidArgument, InvalidInputFile
from .excursion import ExcursionGrid
from .spaces import DistanceMatrix, EuclideanPoints
from .stars import StarCertificate


def _f(v):
    return repr(float(v))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


# -- excursions ------------------------------------------------------------------

def write_excursion(path, grid):
    """CSV with header ``t,f`` and ``n_cells + 1`` rows, 17 significant digits."""
    n = grid.n_cells
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["t", "f"])
        for i, v in enumerate(grid.values.tolist()):
            w.writerow([format(i / n, ".16e"), format(v, ".16e")])


def read_excursion(path, provenance=None):
    """Parse and validate an excursion CSV; problems raise :class:`InvalidInputFile`."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputFile(f"cannot read {path}: {exc.strerror}") from None
    if not rows or [c.strip() for c in rows[0]] != ["t", "f"]:
        raise InvalidInputFile(f"{path}: expected header 't,f'")
    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(c) for c in r] for r in body], dtype=np.float64)
    except ValueError as exc:
        raise InvalidInputFile(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 3:
        raise InvalidInputFile(f"{path}: need at least 3 rows of two columns")
    n = data.shape[0] - 1
    t = data[:, 0]
    if np.any(np.diff(t) <= 0):
        raise InvalidInputFile(f"{path}: t must be strictly increasing")
    if np.max(np.abs(t - np.arange(n + 1) / n)) > 1e-9:
        raise InvalidInputFile(f"{path}: t must be the uniform grid i/{n}")
    try:
        return ExcursionGrid(n, data[:, 1], provenance or "file")
    except InvalidArgument as exc:
        raise InvalidInputFile(f"{path}: {exc}") from None


# -- distance tables ----------------------------------------------------------------

def write_tree_csv(path, tm, indices):
    """``i,j,d`` for every pair ``i < j`` of the given grid indices."""
    idx = np.unique(np.asarray(indices, dtype=np.int64))
    d = tm.distances(idx, idx)
    r, c = np.triu_indices(idx.size, k=1)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["i", "j", "d"])
        for a, b, v in zip(idx[r].tolist(), idx[c].tolist(), d[r, c].tolist()):
            w.writerow([a, b, _f(v)])


def write_leaves(path, tm):
    """``i,t,f`` for the strict local maxima of the excursion."""
    leaves = np.asarray(tm.leaves(), dtype=np.int64)
    n = tm.n_cells
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["i", "t", "f"])
        for i in leaves.tolist():
            w.writerow([i, _f(i / n), _f(tm.values[i])])


def write_map_csv(path, mm):
    idx = mm.sample_indices
    r, c = np.triu_indices(idx.size, k=1)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["i", "j", "d_circ", "d_map"])
        for a, b, dc, dm in zip(idx[r].tolist(), idx[c].tolist(),
                                mm.d_circ[r, c].tolist(), mm.d_map[r, c].tolist()):
            w.writerow([a, b, _f(dc), _f(dm)])


def read_points(path):
    """Point set for covering computations.

    Accepted layouts: a distance table with columns ``i``, ``j`` and ``d``
    (or ``d_map``), listing each unordered pair at least once; or coordinate
    columns only, one point per row. Returns ``(metric, labels)`` where
    ``labels`` are the original ids (table) or row numbers (coordinates).
    """
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise InvalidInputFile(f"cannot read {path}: {exc.strerror}") from None
    if len(rows) < 2:
        raise InvalidInputFile(f"{path}: no data rows")
    header = [c.strip() for c in rows[0]]
    try:
        if "i" in header and "j" in header:
            col = "d" if "d" in header else "d_map" if "d_map" in header else None
            if col is None:
                raise InvalidInputFile(f"{path}: distance table needs a 'd' or 'd_map' column")
            ci, cj, cd = header.index("i"), header.index("j"), header.index(col)
            ii = np.array([int(r[ci]) for r in rows[1:]])
            jj = np.array([int(r[cj]) for r in rows[1:]])
            dd = np.array([float(r[cd]) for r in rows[1:]])
            labels = np.unique(np.concatenate([ii, jj]))
            pos = np.searchsorted(labels, ii), np.searchsorted(labels, jj)
            m = np.full((labels.size, labels.size), np.nan)
            np.fill_diagonal(m, 0.0)
            m[pos[0], pos[1]] = dd
            m[pos[1], pos[0]] = dd
            if np.isnan(m).any() or (m < 0).any():
                raise InvalidInputFile(f"{path}: distance table is incomplete or negative")
            return DistanceMatrix(m), labels
        coords = np.array([[float(c) for c in r] for r in rows[1:]])
    except (ValueError, IndexError) as exc:
        raise InvalidInputFile(f"{path}: {exc}") from None
    if not np.isfinite(coords).all():
        raise InvalidInputFile(f"{path}: non-finite coordinate")
    return EuclideanPoints(coords), np.arange(coords.shape[0])


def write_assouad_csv(path, report, labels=None):
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["center", "R", "r", "N", "exponent"])
        for c, R, r, N, e in report.rows():
            w.writerow([int(labels[c]) if labels is not None else c, _f(R), _f(r), N, _f(e)])


# -- JSON ---------------------------------------------------------------------------

def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    with open(path, "w", newline="") as fh:
        fh.write(dump_json(obj))


def star_to_dict(cert, n_cells):
    out = {
        "metric": cert.metric_id,
        "n": cert.n,
        "center": cert.center,
        "satellites": list(cert.satellites),
        "center_t": cert.center / n_cells,
        "satellite_ts": [s / n_cells for s in cert.satellites],
        "a": float(cert.a),
        "eta": float(cert.eta),
        "rho": float(cert.rho),
        "distances": {"center": [float(v) for v in cert.center_distances],
                      "pairs": [[float(v) for v in row] for row in cert.pair_distances]},
    }
    for key in ("a", "eta"):
        v = getattr(cert, key)
        if isinstance(v, Fraction):
            out[f"{key}_exact"] = str(v)
    return out


def _star_from_dict(d, where):
    try:
        a = Fraction(d["a_exact"]) if "a_exact" in d else float(d["a"])
        eta = Fraction(d["eta_exact"]) if "eta_exact" in d else float(d["eta"])
        sats = tuple(int(s) for s in d.get("satellites", range(len(d["satellite_ts"]))))
        return StarCertificate(
            metric_id=str(d["metric"]), center=int(d.get("center", -1)), satellites=sats,
            a=a, eta=eta, rho=float(d["rho"]),
            center_distances=np.asarray(d["distances"]["center"], dtype=np.float64),
            pair_distances=np.asarray(d["distances"]["pairs"], dtype=np.float64))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInputFile(f"{where}: malformed star record ({exc!r})") from None


def read_stars(path):
    """Star certificates from a JSON file holding one record or a list of them."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputFile(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputFile(f"{path}: invalid JSON ({exc.msg})") from None
    if isinstance(data, dict) and "stars" in data:
        data = data["stars"]
    records = data if isinstance(data, list) else [data]
    return [_star_from_dict(d, path) for d in records]
