"""A walk on a quarter plane whose boundary has a family of column points and two row points."""

import numpy as np

from mpmartin import example1, mu_min

# a 41 x 41 window of the quarter plane, with 26 column points a0..a25 and two row points b0, b1
ex = example1(40, 40, 25)
inst = ex.inst
print("states:", len(inst.states), " basepoint:", inst.states[inst.b])

# the Martin kernel vanishes on the basepoint row
assert np.all(inst.K[inst.b] == 0)

# u is harmonic inside the window and fails only where the box cuts neighbours off
res = mu_min(inst, ex.u, ex.family)
rep = res.report()
for name in ("a0", "a1", "a25", "b0", "b1"):
    row = rep[name]
    print("%-4s mumax %6.2f  m_u %6s  mumin %6.2f  maximal %s" % (name, row["mumax"], row["m_u"], row["mumin"], row["maximal"]))

# b1 is dominated by b0, so its own weight is pushed to -inf and the hull lifts it back up
# to the level of the a-points that accumulate at it
print("b1 <= b0:", bool(res.ops.order[res.ops.ps.pos["b1"], res.ops.ps.pos["b0"]]))

# the least representing measure still reproduces u on the core of the window
print("mumin represents u on the core:", res.represents(res.mumin, ex.family.core_positions()).verdict)
