"""Partial deletion of missing data by row/column selection.

Pick rows and columns of a data matrix to keep so that as many valid
cells as possible survive while every kept row and column has at most a
fraction ``gamma`` of missing cells.
"""

from .baselines import automiss, featurewise, listwise, naive
from .greedy import combined_greedy, mrclean_greedy, nomiss_greedy
from .mask import (CleanConfig, EmptyInputError, ParseError, Selection, ValidityMask,
                   apply_selection, feasibility_check, load_matrix, orient)
from .maxcol import (Incumbent, MaxColRules, SubProblem, min_columns, prepare_subproblem,
                     row_pair_prune, solve_maxcol, solve_subproblem)
from .rowcol import (ConflictGraph, build_conflict_graph, export_element_ip, export_rowcol_ip,
                     solve_rowcol_nomiss)

__version__ = "0.1.0"

__all__ = [
    "CleanConfig", "ConflictGraph", "EmptyInputError", "Incumbent", "MaxColRules", "ParseError",
    "Selection", "SubProblem", "ValidityMask", "apply_selection", "automiss",
    "build_conflict_graph", "combined_greedy", "export_element_ip", "export_rowcol_ip",
    "featurewise", "feasibility_check", "listwise", "load_matrix", "min_columns",
    "mrclean_greedy", "naive", "nomiss_greedy", "orient", "prepare_subproblem",
    "row_pair_prune", "solve_maxcol", "solve_rowcol_nomiss", "solve_subproblem",
]
