"""Hand the integer programs to an external MIP solver.

The models are written in the plain LP text format read by CPLEX, Gurobi,
HiGHS, SCIP and friends.  Here we write both models for a tiny matrix and
print one of them.
"""

import sys
import tempfile
from pathlib import Path

from nomiss import export_element_ip, export_rowcol_ip
from nomiss.mask import mask_from_rows

mask = mask_from_rows(["11.1", "1111", ".111"])
print(export_rowcol_ip(mask, "0.25"))

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
(out / "rowcol.lp").write_text(export_rowcol_ip(mask, "0.25"))
(out / "element.lp").write_text(export_element_ip(mask, "0.25"))
print(f"models written to {out}")
