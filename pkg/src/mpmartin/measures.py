"""Maximum and minimum representing measures of a superharmonic vector.

Pipeline: ``mu_max`` on every point, the order ``z <=_u w`` comparing
``z + mu_max(z)`` with ``w + mu_max(w)`` on the window, ``m_u`` killing every
point dominated by a distinct point, and the upper semicontinuous hull along
declared accumulation sequences, which yields ``mu_min``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import NotSuperharmonic
from .harmonic import Measure, is_harmonic, is_superharmonic, represents
from .kernels import _approach, build_point_set, minimal_martin_space, tail_limit
from .semiring import DEFAULT_TOL, NEG_INF


def mu_max(inst, u, ps, name, tol=None):
    """``limsup A*[b, j] + u[j]`` as ``K[:, j]`` approaches the point ``name``."""
    tol = inst.tol if tol is None else tol
    row = inst.Astar.weights[inst.b]
    u = np.asarray(u, dtype=float)
    wit, seq = _approach(ps, name)
    vals = [row[j] + u[j] for j in wit]
    if seq:
        vals.append(tail_limit([row[j] + u[j] for j in seq], tol))
    return float(max(vals)) if vals else NEG_INF


class KappaEvaluator:
    """``kappa_max(i, xi) = xi(i) + mu_max(xi)``, its ``nu`` analogue, and
    ``k(i, j) = A*[i, j] + u[j]``."""

    def __init__(self, inst, u, ps, mumax):
        self.inst = inst
        self.u = np.asarray(u, dtype=float)
        self.ps = ps
        self.mumax = np.asarray(mumax, dtype=float)
        self._wpos = {s: k for k, s in enumerate(ps.window)}

    def _i(self, i):
        return self._wpos[self.inst.index[i] if isinstance(i, str) else i]

    def kappa_max(self, i, name):
        k = self.ps.pos[name]
        return float(self.ps.vectors[k, self._i(i)] + self.mumax[k])

    def kappa_nu(self, i, name, nu):
        return float(self.ps.vector(name)[self._i(i)] + nu.get(name, NEG_INF))

    def k(self, i, j):
        ii = self.inst.index[i] if isinstance(i, str) else i
        jj = self.inst.index[j] if isinstance(j, str) else j
        return float(self.inst.Astar.weights[ii, jj] + self.u[jj])

    def table(self):
        """All ``kappa_max`` values, points by window states."""
        return self.ps.vectors + self.mumax[:, None]


@numba.njit(cache=True)
def _dominance(kappa, tol, order):
    p, w = kappa.shape
    D = np.zeros((p, p), dtype=np.bool_)
    for z in range(p):
        for y in range(p):
            ok = True
            for c in order:
                if not kappa[z, c] <= kappa[y, c] + tol:
                    ok = False
                    break
            D[z, y] = ok
    return D


def dominance(kappa, tol=DEFAULT_TOL, seed=0):
    """Boolean matrix ``D[z, w]``: ``kappa[z] <= kappa[w] + tol`` everywhere.

    Coordinates are scanned in a fixed random order with early exit, so
    most pairs are rejected after a few comparisons.
    """
    kappa = np.ascontiguousarray(kappa, dtype=float)
    order = np.random.default_rng(seed).permutation(kappa.shape[1])
    return _dominance(kappa, float(tol), order)


def order_leq(ev, z, w, tol=DEFAULT_TOL):
    """``z <=_u w`` on the window; a point with ``mu_max = -inf`` is below everything."""
    kz, kw = ev.ps.pos[z], ev.ps.pos[w]
    if ev.mumax[kz] == NEG_INF:
        return True
    a = ev.ps.vectors[kz] + ev.mumax[kz]
    b = ev.ps.vectors[kw] + ev.mumax[kw]
    return bool(np.all(a <= b + tol))


@dataclass
class OrderedPointSet:
    ps: object
    mumax: np.ndarray
    order: np.ndarray
    tol: float

    @property
    def names(self):
        return self.ps.names

    @property
    def order_pairs(self):
        z, w = np.nonzero(self.order)
        return {(self.names[a], self.names[b]) for a, b in zip(z, w)}

    @property
    def maximal(self):
        off = self.order & ~np.eye(len(self.names), dtype=bool)
        return {n: not off[k].any() for k, n in enumerate(self.names)}

    def dominators(self, name):
        k = self.ps.pos[name]
        return [n for j, n in enumerate(self.names) if j != k and self.order[k, j]]

    def mumax_measure(self):
        return Measure(dict(zip(self.names, self.mumax.tolist())), "points")


def ordered_point_set(inst, u, ps, tol=None):
    tol = inst.tol if tol is None else tol
    mumax = np.array([mu_max(inst, u, ps, n, tol) for n in ps.names], dtype=float)
    kappa = ps.vectors + mumax[:, None]
    order = dominance(kappa, tol)
    dead = np.isneginf(mumax)
    order[dead, :] = True
    return OrderedPointSet(ps, mumax, order, tol)


def m_u(ops):
    """``mu_max`` on ``<=_u``-maximal points, ``-inf`` on dominated ones."""
    maximal = ops.maximal
    dens = {
        n: (float(ops.mumax[k]) if maximal[n] else NEG_INF) for k, n in enumerate(ops.names)
    }
    return Measure(dens, "points")


def usc_hull(names, m, accumulation, mumax=None, tol=DEFAULT_TOL):
    """Upper semicontinuous hull of ``m`` along declared accumulation sequences.

    ``accumulation`` holds ``(sequence_names, limit_name)`` pairs. When
    ``mumax`` is given, a point where ``m`` already equals ``mu_max`` is left
    as is: ``mu_max`` is upper semicontinuous and bounds ``m``, so no
    sequence can raise it further.
    """
    dens = {n: m[n] for n in names}
    for seq, limit in accumulation:
        if limit not in dens:
            continue
        if mumax is not None and dens[limit] >= mumax[limit] - tol:
            continue
        vals = [m[n] for n in seq]
        if not vals:
            continue
        dens[limit] = max(dens[limit], tail_limit(vals, tol))
    return Measure(dens, m.domain)


@dataclass
class MeasuresResult:
    inst: object
    u: np.ndarray
    ops: OrderedPointSet
    m: Measure
    mumin: Measure
    minimal: list | None = None
    harmonic: bool | None = None
    notes: dict = field(default_factory=dict)

    @property
    def ps(self):
        return self.ops.ps

    @property
    def mumax(self):
        return self.ops.mumax_measure()

    def restriction(self):
        """``mu_min`` restricted to the minimal Martin space (others set to -inf)."""
        if self.minimal is None:
            self.minimal = minimal_martin_space(self.inst, self.ps, self.ops.tol)
        keep = set(self.minimal)
        return Measure(
            {n: (v if n in keep else NEG_INF) for n, v in self.mumin.density.items()},
            "minimal",
        )

    def represents(self, measure, states=None, tol=None):
        """Window representation check of ``u`` by ``measure`` on chosen window positions."""
        tol = self.ops.tol if tol is None else tol
        ps = self.ps
        cols = np.arange(len(ps.window)) if states is None else np.asarray(states, dtype=int)
        pts = [(ps.vectors[k, cols], n) for k, n in enumerate(ps.names)]
        labels = [self.inst.states[ps.window[c]] for c in cols]
        u_w = self.u[[ps.window[c] for c in cols]]
        return represents(pts, measure, u_w, tol, labels=labels, window=True)

    def report(self):
        """Per-point summary: mumax, m_u, mumin, maximality and dominators."""
        out = {}
        maximal = self.ops.maximal
        for k, n in enumerate(self.ops.names):
            out[n] = {
                "mumax": float(self.ops.mumax[k]),
                "m_u": self.m[n],
                "mumin": self.mumin[n],
                "maximal": bool(maximal[n]),
                "dominators": self.ops.dominators(n),
            }
        return out


def mu_min(
    inst,
    u,
    family=None,
    column_states=None,
    tol=None,
    interior=None,
    harmonic_restriction=False,
    ps=None,
):
    """Minimum representing measure of a superharmonic ``u``.

    Runs ``mu_max -> <=_u -> m_u -> usc hull`` over the point set built from
    the instance and optional boundary family. ``interior`` (state indices)
    limits the harmonicity test that decides whether the restriction to the
    minimal Martin space is reported.
    """
    tol = inst.tol if tol is None else tol
    u = np.asarray(u, dtype=float)
    sup = is_superharmonic(inst.A, u, tol)
    if not sup.verdict:
        raise NotSuperharmonic(sup)
    if ps is None:
        ps = build_point_set(inst, family, column_states, tol)
    ops = ordered_point_set(inst, u, ps, tol)
    m = m_u(ops)
    mumax = dict(zip(ops.names, ops.mumax.tolist()))
    hull = usc_hull(ops.names, m, ps.accumulation, mumax, tol)
    harmonic = is_harmonic(inst.A, u, tol, interior).verdict
    res = MeasuresResult(inst, u, ops, m, hull, harmonic=harmonic)
    if harmonic_restriction:
        res.minimal = minimal_martin_space(inst, ps, tol)
    return res
