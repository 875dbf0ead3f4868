"""Metric side: graph metrics, horofunctions, Busemann points and
inf-representations of distance-like functions.

A metric ``d`` is turned into the max-plus kernel ``A = -d``; horofunctions
then appear as negated Martin boundary points and the greatest ``nu`` with
``f = min_h (h + nu(h))`` comes out of the minimum representing measure of
``-f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Disconnected, EmptySupport, NotDistanceLike
from .harmonic import Report, residual
from .kernels import BoundaryFamily, MartinInstance, tail_vector
from .measures import mu_min
from .semiring import DEFAULT_TOL, NEG_INF, Kernel, kleene_star, mat_mat

POS_INF = np.inf


@dataclass(eq=False)
class MetricInstance:
    """Finite metric on labelled states with a basepoint."""

    states: tuple
    d: np.ndarray
    basepoint: str
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.states = tuple(str(s) for s in self.states)
        self.basepoint = str(self.basepoint)
        self.d = np.array(self.d, dtype=float)
        self.index = {s: i for i, s in enumerate(self.states)}
        if self.basepoint not in self.index:
            raise KeyError("basepoint %r is not a state" % self.basepoint)
        problems = self.axiom_violations()
        if problems:
            raise ValueError("not a metric: " + "; ".join(problems))

    def axiom_violations(self):
        d, tol = self.d, self.tol
        out = []
        if d.shape != (len(self.states),) * 2:
            return ["distance matrix has shape %s" % (d.shape,)]
        if not np.all(np.isfinite(d)):
            out.append("infinite distance")
        if np.any(np.abs(np.diag(d)) > tol):
            out.append("nonzero self-distance")
        if np.any(np.abs(d - d.T) > tol):
            out.append("asymmetric")
        if np.any(d < -tol):
            out.append("negative distance")
        if not out and np.any(-mat_mat(-d, -d) < d - tol):
            out.append("triangle inequality fails")
        return out

    @property
    def b(self):
        return self.index[self.basepoint]

    def idx(self, labels):
        return [self.index[str(s)] for s in labels]


def graph_metric(nodes, edges, basepoint=None, tol=DEFAULT_TOL):
    """Shortest-path metric of a weighted undirected graph.

    ``edges`` holds ``(a, b, weight)`` with positive weights. Distances come
    from the max-plus closure of the negated weights.
    """
    nodes = [str(n) for n in nodes]
    index = {n: i for i, n in enumerate(nodes)}
    W = np.full((len(nodes), len(nodes)), NEG_INF)
    for a, b, w in edges:
        w = float(w)
        if not w > 0:
            raise ValueError("edge weights must be positive")
        i, j = index[str(a)], index[str(b)]
        W[i, j] = W[j, i] = max(W[i, j], -w)
    star = kleene_star(Kernel(nodes, W), tol).weights
    if np.isneginf(star).any():
        i, j = np.argwhere(np.isneginf(star))[0]
        raise Disconnected("no path between %s and %s" % (nodes[i], nodes[j]))
    base = nodes[0] if basepoint is None else basepoint
    return MetricInstance(nodes, -star, base, tol)


def to_kernel(m):
    """Kernel ``A[x, y] = -d(x, y)``."""
    A = -m.d
    np.fill_diagonal(A, 0.0)
    return Kernel(m.states, A)


def to_instance(m):
    return MartinInstance(to_kernel(m), m.basepoint, m.tol)


@dataclass
class DistanceLikeReport:
    verdict: bool
    checked: int
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    empty_levels: list = field(default_factory=list)

    def worst(self):
        return max((abs(v[3] - v[2]) for v in self.violations), default=0.0)


def _outside_distance(m, window):
    win = np.asarray(window)
    outside = np.setdiff1d(np.arange(len(m.states)), win)
    if outside.size == 0:
        return np.full(win.size, POS_INF)
    return m.d[np.ix_(win, outside)].min(axis=1)


def is_distance_like(m, f, window=None, t_grid=None, tol=DEFAULT_TOL, margin=0.0):
    """Check ``min over {y : f(y) <= t} of d(x, y) = f(x) - t`` on a window.

    ``f`` is tabulated on ``window`` (labels, default every state). The pair
    ``(x, t)`` is only checked when ``f(x) - t + margin`` is below the
    distance from ``x`` to the nearest state outside the window, so level
    sets cut off by the window never fake a violation. ``t_grid`` defaults
    to the values attained by ``f``.
    """
    labels = list(m.states) if window is None else [str(s) for s in window]
    win = m.idx(labels)
    f = np.asarray(f, dtype=float)
    if f.shape != (len(win),):
        raise ValueError("f has %d entries for a window of %d" % (f.size, len(win)))
    grid = np.unique(f) if t_grid is None else np.asarray(sorted(t_grid), dtype=float)
    D = m.d[np.ix_(win, win)]
    reach = _outside_distance(m, win)
    rep = DistanceLikeReport(True, 0)
    for t in grid:
        level = f <= t + tol
        for k, x in enumerate(labels):
            if t > f[k] + tol:
                continue
            if not level.any():
                rep.empty_levels.append((x, float(t)))
                continue
            if not f[k] - t + margin < reach[k]:
                rep.skipped.append((x, float(t)))
                continue
            rep.checked += 1
            got = float(D[k, level].min())
            want = float(f[k] - t)
            if abs(got - want) > tol:
                rep.violations.append((x, float(t), want, got))
    rep.verdict = not rep.violations
    return rep


@dataclass
class HorofunctionWindow:
    window: list
    h: np.ndarray
    source_sequence: list
    name: str = "h"

    def lipschitz_gap(self, m):
        """Largest ``|h(x) - h(y)| - d(x, y)``; at most tol for a genuine horofunction."""
        win = m.idx(self.window)
        diff = np.abs(self.h[:, None] - self.h[None, :])
        return float((diff - m.d[np.ix_(win, win)]).max())


def horofunction_limit(m, z_seq, window=None, tol=DEFAULT_TOL, name="h"):
    """Limit of ``d(x, z_n) - d(b, z_n)`` on the window along ``z_seq``."""
    labels = list(m.states) if window is None else [str(s) for s in window]
    win = m.idx(labels)
    z = m.idx(z_seq)
    rows = m.d[np.ix_(win, z)].T - m.d[m.b, z][:, None]
    h = tail_vector(rows, tol)
    return HorofunctionWindow(labels, h, [str(s) for s in z_seq], name)


def rieffel_threshold(m, gamma, eps):
    """First sample index ``N`` with ``|d(g_t, g_s) + d(g_s, g_0) - t| < eps``
    for all sampled ``N <= s <= t``; ``None`` if even the last sample fails.

    ``gamma`` is sampled at ``t = 0, 1, 2, ...`` (hop count).
    """
    g = m.idx(gamma)
    n = len(g)
    t = np.arange(n, dtype=float)
    E = np.abs(m.d[np.ix_(g, g)] + m.d[g, g[0]][:, None] - t[None, :])
    bad = np.triu(E >= eps)  # rows s, columns t >= s
    # bad pair (s, t) forces N > s
    rows = np.flatnonzero(bad.any(axis=1))
    N = 0 if rows.size == 0 else int(rows.max()) + 1
    return N if N < n else None


def rieffel_check(m, gamma, eps):
    """Rieffel almost-geodesic test on a finite sample.

    Passes when the inequality holds on a tail holding at least
    ``max(2, len(gamma) // 2)`` samples.
    """
    N = rieffel_threshold(m, gamma, eps)
    if N is None:
        return False
    return len(gamma) - N >= max(2, len(gamma) // 2)


def _points(points):
    out = []
    for p in points:
        if isinstance(p, HorofunctionWindow):
            out.append((p.h, p.name))
        else:
            out.append((np.asarray(p[0], dtype=float), p[1]))
    return out


def inf_representation_check(f, points, nu, tol=DEFAULT_TOL, labels=None):
    """Residuals ``f(x) - min_h (h(x) + nu(h))``; ``nu = +inf`` drops a point."""
    pts = _points(points)
    active = [(v, n) for v, n in pts if nu.get(n, POS_INF) < POS_INF]
    if not active:
        raise EmptySupport("nu is +inf on every point")
    f = np.asarray(f, dtype=float)
    inf = np.min([v + nu[n] for v, n in active], axis=0)
    r = residual(f, inf)
    labs = list(labels) if labels is not None else [str(i) for i in range(f.size)]
    return Report("inf_represents", labs, r, bool(np.all(np.abs(r) <= tol)), tol, window=True)


def busemann_family(m, horofunctions, window):
    """Negated horofunctions as a boundary family for the kernel ``-d``."""
    return BoundaryFamily(
        window=list(window),
        points={h.name: -h.h for h in horofunctions},
        rep_sequences={h.name: list(h.source_sequence) for h in horofunctions},
        accumulation=[],
        tol=m.tol,
        column_states=[],
    )


def greatest_nu(m, f, horofunctions, window=None, tol=None, margin=0.0, check=True):
    """Greatest ``nu`` with ``f = min_h (h + nu(h))`` over the given horofunctions.

    ``f`` is a vector over every state of ``m``; the horofunctions share the
    window. Runs the minimum-measure pipeline for ``u = -f`` on the kernel
    ``-d`` restricted to the negated horofunctions and returns ``-mu_min``
    (``+inf`` where ``mu_min = -inf``).
    """
    tol = m.tol if tol is None else tol
    window = list(horofunctions[0].window) if window is None else [str(s) for s in window]
    f = np.asarray(f, dtype=float)
    if check:
        rep = is_distance_like(m, f[m.idx(window)], window, tol=tol, margin=margin)
        if not rep.verdict:
            raise NotDistanceLike(rep)
    inst = to_instance(m)
    fam = busemann_family(m, horofunctions, window)
    res = mu_min(inst, -f, fam, column_states=[], tol=tol)
    return {
        n: (POS_INF if v == NEG_INF else float(-v)) for n, v in res.mumin.density.items()
    }
