"""
Parseval closed form against the series
=======================================

The sum over i >= 1 of (i / (i^2 + n))^2 has a closed form in sinh. We
compare it with a long partial sum, allowing 1/terms for the omitted tail.
"""

# %%
from clusterbound import parseval_check

for n in (1, 4, 9, 16):
    res = parseval_check(n, terms=100_000)
    print(n, res.status, "residual", res.residual.rounded(12), "tail bound", res.tail_bound)

# %%
# the tail from i = n onward is at least 1/(n+1)
res = parseval_check(9, terms=1000)
print(res.tail_estimate_truncated, res.tail_estimate_closed)
