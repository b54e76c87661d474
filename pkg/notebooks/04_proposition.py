"""
Checking b(n) > sqrt(n) - pi/8
==============================

``verify_proposition`` proves the inequality for one n and, on the side,
re-checks each estimate of the analytic argument. For n < 9 the certificate
is flagged exploratory.
"""

# %%
from clusterbound import verify_proposition
from clusterbound.numerics import decimal_str

cert = verify_proposition(12)
print(decimal_str(cert.b, 8), "vs", cert.rhs.rounded(10))
print(cert.verdict, "at", cert.digits, "digits")
for item in cert.proof_chain:
    print("  ", item)

# %%
# small n: the final comparison still goes through, some estimates do not
cert = verify_proposition(4)
print(cert.verdict, "exploratory:", cert.exploratory)
print([i.name for i in cert.failed_items()])
