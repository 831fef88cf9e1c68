"""Continuum random trees, Brownian-map pseudometrics, approximate n-stars and
covering-number dimension estimates on sampled excursions."""

from .dimension import (AssouadReport, CounterexamplePoint, CounterexampleSpace, QSProfile,
                        Verdict, assouad_estimate, counterexample_distance, covering_number,
                        doubling_probe, qs_obstruction)
from .errors import (InvalidArgument, InvalidExcursion, InvalidInputFile, InvalidProfile,
                     ResolutionError, StarryError, SubsetError)
from .excursion import (ExcursionGrid, ZigZagParams, bridge_from_wiener, brownian_excursion,
                        example51_eval, example51_grid, grid_from_function, planted_zigzag,
                        sample_wiener, vervaat_excursion, zigzag_eval, zigzag_grid,
                        zigzag_values)
from .snake import (MapMetric, SnakeLabels, check_bounds, map_metric, select_subset,
                    shortest_path_closure, simulate_labels, simulate_labels_batch)
from .stars import (StarCertificate, WindowMatch, generic_star_search, map_star_from_window,
                    map_star_points, scan_windows, star_from_window, star_parameters,
                    verify_star)
from .treemetric import SparseTableMin, TreeMetric

__version__ = "0.1.0"
