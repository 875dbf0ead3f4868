"""Geodesic parameters on a two-state kernel and rebasing on random kernels."""

import numpy as np

from mpmartin import Kernel, MartinInstance, min_parameter_kernel, rebase
from mpmartin.geodesics import min_parameter_at

NEG = -np.inf
A = Kernel(["1", "2"], [[NEG, -1.0], [-2.0, NEG]])
inst = MartinInstance(A, "1")
print("K =\n", inst.K)

# going there and back costs 3, which is the smallest beta that makes the walk a beta-geodesic
print("beta of 1,2,1:", min_parameter_kernel(inst, ["1", "2", "1"]))

# moving the basepoint can only cost what the detour through the new base costs
beta = min_parameter_kernel(inst, ["1", "2"])
print("rebased bound:", rebase(inst, ["1", "2"], beta, "2"), " exact:", min_parameter_at(inst, ["1", "2"], "2"))

rng = np.random.default_rng(0)
worst = -np.inf
for _ in range(50):
    n = int(rng.integers(2, 7))
    W = np.where(rng.random((n, n)) < 0.6, -rng.integers(0, 32, (n, n)) / 16, NEG)
    np.fill_diagonal(W, 0.0)
    # a cycle through every state keeps them all reachable from the basepoint
    W[np.arange(n), (np.arange(n) + 1) % n] = -1.0
    names = [str(k) for k in range(n)]
    inst = MartinInstance(Kernel(names, W), "0")
    path = [0]
    for _ in range(5):
        path.append(int(rng.choice(np.flatnonzero(W[path[-1]] > NEG))))
    beta = min_parameter_kernel(inst, path)
    for j in names:
        if inst.Astar.weights[inst.index[j], path[0]] > NEG:
            worst = max(worst, min_parameter_at(inst, path, j) - rebase(inst, path, beta, j))
print("largest excess of exact over bound (should be <= 0):", worst)
