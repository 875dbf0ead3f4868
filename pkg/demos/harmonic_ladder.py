"""A chain of states whose boundary points all carry weight, none dominating another."""

import numpy as np

from mpmartin import example2, mu_min, witness_geodesic
from mpmartin.corpus import example2_K

J = 100
ex = example2(J)
inst = ex.inst

# the kernel has a closed form, compare it entry by entry
keys = list(range(1, J + 1)) + [None]
want = np.array([[example2_K(i, j) for j in keys] for i in keys])
print("max kernel error:", np.abs(inst.K - want).max())

res = mu_min(inst, ex.u, ex.family, interior=list(range(J)), harmonic_restriction=True)
for n in ("K[1]", "K[2]", "K[10]", "K[100]", "K[inf]"):
    print("%-7s mumax %8.4f  mumin %8.4f" % (n, res.mumax[n], res.mumin[n]))

# K[inf] is the limit of the others, so it drops out of the minimal space
print("minimal points:", len(res.minimal), " K[inf] minimal:", "K[inf]" in res.minimal)

# an almost-geodesic that starts at inf and walks down towards a maximal point
cert = witness_geodesic(inst, ex.u, "inf", 0.1, horizon=100, interior=list(range(J)))
print("witness path head:", cert.path[:8], "...")
print("beta %.4f  gap %.4f" % (cert.beta, cert.checks["gap"]))
