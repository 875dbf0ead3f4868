"""Horofunctions of small graphs and the inf-representation of a distance-like function."""

import numpy as np

from mpmartin import greatest_nu, horofunction_limit, inf_representation_check, is_distance_like, metric_templates

t = metric_templates("z_line", 200)
m = t.metric
horos = [horofunction_limit(m, t.rays[r], t.window, name=r) for r in ("h+", "h-")]
for h in horos:
    print(h.name, "on the window starts", h.h[:5], " distance-like:", is_distance_like(m, h.h, t.window).verdict)

# f is a min of two Busemann points shifted by constants; the greatest nu recovers the shifts
xs = np.array([float(s) for s in m.states])
f = np.minimum(-xs + 2.25, xs - 0.75)
nu = greatest_nu(m, f, horos)
print("nu:", nu)
fw = f[m.idx(t.window)]
print("nu represents f:", inf_representation_check(fw, horos, nu).verdict)
print("nudging h+ up by 1e-8 breaks it:", not inf_representation_check(fw, horos, {**nu, "h+": nu["h+"] + 1e-8}).verdict)

# on a star tree an arm that f never uses gets weight +inf
t = metric_templates("star_tree", 60, arms=3)
m = t.metric
horos = [horofunction_limit(m, t.rays[r], t.window, name=r) for r in sorted(t.rays)]
r = m.d[:, m.b]
arm = {a: np.where([s.startswith("%d:" % a) for s in m.states], -r, r) for a in range(3)}
print("star tree nu:", greatest_nu(m, np.minimum(arm[0] + 2.0, arm[1] - 1.0), horos))
