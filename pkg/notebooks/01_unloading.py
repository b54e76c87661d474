"""
Unloading a weighted cluster
============================

A weighted cluster is a list of points, a set of proximity pairs (j, i)
meaning point j is proximate to point i, and an integer per point. Run with
``python notebooks/01_unloading.py``.
"""

# %%
from clusterbound import WeightedCluster, excesses, is_consistent, unload

# two points, the second proximate to the first; multiplicity 0 then 1
c = WeightedCluster.build(2, {(2, 1)}, (0, 1))
print("excesses:", excesses(c))          # (-1, 1): point 1 is short by one
print("consistent?", is_consistent(c))

# %%
# one step moves a unit onto point 1 and off point 2
result, trace = unload(c)
print("unloaded:", result.m)
for s in trace.steps:
    print(f"  pivot {s.pivot}, n = {s.amount}, excess {s.rho_before} -> {s.rho_after}")

# %%
# a bigger one, with a satellite point (4 is proximate to both 2 and 3)
c = WeightedCluster.build(4, {(2, 1), (3, 2), (4, 2), (4, 3)}, (-2, -2, -3, -2))
result, trace = unload(c)
print(c.m, "->", result.m, f"in {len(trace)} steps")

# the order in which violations get fixed does not matter
for policy in ("lowest", "highest", "most-negative"):
    print(f"  {policy:>14}: {unload(c, policy)[0].m}")

# %%
# the proximity matrix, with numpy
P = c.structure.matrix()
print(P)
print("intersection matrix:\n", c.structure.intersection_matrix())
