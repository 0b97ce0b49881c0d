from .weights import fornberg_weights
from .grid import Grid, GridKind, uniform_grid, sinh_clustered_grid
from .diff_matrix import DiffMatrix, diff_matrix, diff_matrices, dump_coo
