"""
Comparing degree bounds
=======================

The product bound is an exact rational. The square-root bounds carry pi and
square roots, so they are enclosures; comparisons only report an order once
the enclosures separate.
"""

# %%
import numpy as np

from clusterbound import compare_bounds, improvement_scan, nagata_floor, theorem_bound
from clusterbound.numerics import decimal_str

b = theorem_bound(10, 1)
print(b, "~", decimal_str(b, 6))

# %%
for r in (10, 13, 16):
    rep = compare_bounds(r, 1)
    print(r, {k: str(v.verdict) for k, v in rep.verdicts.items()})

# %%
# where does the product beat floor(sqrt(r))?
scan = improvement_scan(10, 100)
print(scan.improving)
for w in scan.windows:
    print(f"window n={w.n}: ({decimal_str(w.lower.upper, 6)}, {w.upper})")

# %%
# the gap between the product bound and sqrt(r), as floats for a quick look
rs = np.arange(10, 201)
gap = np.array([float(theorem_bound(int(r), 1)) for r in rs]) - np.sqrt(rs)
print("gap min/max:", gap.min().round(4), gap.max().round(4))
print("nagata floors:", [nagata_floor(int(r)) for r in rs[:8]])
