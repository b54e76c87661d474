"""
Staged unloading on chain clusters
==================================

Start from r points all of multiplicity m. Stage i reinterprets the current
system on the depth-i chain and unloads it; every stage is checked with
exact rationals.
"""

# %%
from clusterbound import simulate_theorem
from clusterbound.specialization import build_chain

print(build_chain(4, 3).sorted_pairs())
print(build_chain(4, 4).sorted_pairs())

# %%
sim = simulate_theorem(4, 2)
for st in sim.stages:
    print(f"stage {st.stage}: {st.input} -> {st.output}   A = {st.A}, target = {st.target}")
    for check in st.checks:
        print("   ", check)

cert = sim.certificate
print(f"m1 = {cert.m1} >= {cert.bound}: {cert.certified}")

# %%
# a longer run; the first point collects almost everything
sim = simulate_theorem(12, 3)
print(sim.certificate.final, float(sim.certificate.bound))
print("all stages passed:", sim.passed)
