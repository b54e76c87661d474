"""Weighted clusters of infinitely near points, unloading, and degree bounds.

Submodules:

- ``numerics``: exact rationals and outward-rounded enclosures (pi, sqrt, exp, sinh).
- ``cluster``: proximity structures, multiplicities, excesses, the cluster file format.
- ``unloading``: the unloading procedure with step traces.
- ``specialization``: chain clusters and the staged unloading behind the product bound.
- ``bounds``: the product bound against floor(sqrt(r)) m, sqrt(r-1) - pi/8 and Xu's bounds.
- ``product_bound``: proof that the product exceeds sqrt(n) - pi/8, step by step.
- ``cli``: the ``clusterbound`` command.
"""

from .bounds import BoundReport, compare_bounds, improvement_scan, nagata_floor, theorem_bound
from .cluster import (
    ClusterError,
    ProximityStructure,
    WeightedCluster,
    dumps_cluster,
    excesses,
    is_consistent,
    loads_cluster,
    scheme_degree,
    validate,
)
from .numerics import Enclosure, Verdict, enclose, separate
from .product_bound import (
    check_identities,
    eps_delta,
    parseval_check,
    product_b,
    verify_proposition,
)
from .specialization import build_chain, check_descarrega, simulate_theorem
from .unloading import Policy, UnloadingStep, UnloadingTrace, equivalent, unload, unload_step

__version__ = "0.1.0"
