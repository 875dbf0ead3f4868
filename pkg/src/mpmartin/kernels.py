"""Martin kernel, finite Martin space, H-flat and windowed boundary families.

Infinite Martin spaces are handled through :class:`BoundaryFamily` windows:
closed-form boundary vectors tabulated on a finite set of states, each with a
representative state sequence and declared accumulation relations. Limits
along those sequences are read off with :func:`tail_limit`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numba
import numpy as np

from .errors import InaccessibleState, NonConvergent
from .semiring import DEFAULT_TOL, NEG_INF, Kernel, kleene_plus, star_from_plus

TAIL = 3


def close(a, b, tol):
    """Elementwise ``|a - b| <= tol`` that treats ``-inf == -inf`` as equal."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        return (a == b) | (np.abs(a - b) <= tol)


def tail_limit(values, tol=DEFAULT_TOL):
    """Limit of a sequence read off its last three terms.

    Three terms pairwise within ``tol`` give the last term. A tail falling by
    non-shrinking steps is taken to diverge to -inf. Anything else raises
    :class:`NonConvergent`. Sequences shorter than three terms are taken as
    realised by their last term.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise NonConvergent("empty sequence")
    if v.size < TAIL:
        return float(v[-1])
    t = v[-TAIL:]
    if np.all(close(t[:, None], t[None, :], tol)):
        return float(t[-1])
    if np.isneginf(t[-1]):
        return NEG_INF
    steps = -np.diff(t)
    if np.all(np.isfinite(t)) and np.all(steps > tol) and steps[-1] >= steps[0] - tol:
        return NEG_INF
    raise NonConvergent("tail %s does not stabilise within %g" % (t.tolist(), tol))


def tail_vector(rows, tol=DEFAULT_TOL):
    """Coordinatewise :func:`tail_limit` for a sequence of vectors (rows)."""
    rows = np.asarray(rows, dtype=float)
    if rows.shape[0] < TAIL:
        raise NonConvergent("need at least %d terms, got %d" % (TAIL, rows.shape[0]))
    t = rows[-TAIL:]
    ok = np.ones(rows.shape[1], dtype=bool)
    for a in range(TAIL):
        for b in range(a + 1, TAIL):
            ok &= close(t[a], t[b], tol)
    if not ok.all():
        bad = np.flatnonzero(~ok)
        raise NonConvergent(
            "%d coordinates fail to stabilise (first index %d)" % (bad.size, bad[0])
        )
    return t[-1].copy()


@dataclass(frozen=True, eq=False)
class MartinInstance:
    """Kernel plus basepoint, with ``A+`` and ``A*`` computed once."""

    A: Kernel
    basepoint: str
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "basepoint", str(self.basepoint))
        if self.basepoint not in self.A.index:
            raise KeyError("basepoint %r is not a state" % self.basepoint)
        Aplus = kleene_plus(self.A, self.tol)
        Astar = star_from_plus(Aplus)
        row = Astar.weights[self.b]
        missing = np.flatnonzero(np.isneginf(row))
        if missing.size:
            raise InaccessibleState(self.A.states[missing[0]])
        object.__setattr__(self, "Aplus", Aplus)
        object.__setattr__(self, "Astar", Astar)

    @property
    def states(self):
        return self.A.states

    @property
    def index(self):
        return self.A.index

    @property
    def b(self):
        return self.A.index[self.basepoint]

    @cached_property
    def K(self):
        """Martin kernel as an ndarray: ``K[i, j] = A*[i, j] - A*[b, j]``."""
        S = self.Astar.weights
        K = S - S[self.b][None, :]
        K[self.b] = 0.0
        return K


def martin_kernel(inst):
    return Kernel(inst.states, inst.K)


@dataclass
class MartinPoint:
    name: str
    vector: np.ndarray
    witnesses: list = field(default_factory=list)


@numba.njit(cache=True)
def _groups(M, tol, order):
    p = M.shape[0]
    group = np.full(p, -1)
    for i in range(p):
        if group[i] >= 0:
            continue
        group[i] = i
        for k in range(i + 1, p):
            if group[k] >= 0:
                continue
            same = True
            for c in order:
                a, b = M[i, c], M[k, c]
                if not (a == b or abs(a - b) <= tol):
                    same = False
                    break
            if same:
                group[k] = i
    return group


def _pairs_close(M, tol, seed=0):
    """Group rows of ``M`` equal within ``tol`` in sup norm (first row of each group labels it)."""
    M = np.ascontiguousarray(M, dtype=float)
    order = np.random.default_rng(seed).permutation(M.shape[1])
    return _groups(M, float(tol), order)


def finite_martin_space(inst, states=None, tol=None):
    """Distinct Martin columns with the states that witness each one.

    Columns are compared in sup norm over all states; the result is ordered by
    first witness and named ``K[<first witness>]``.
    """
    tol = inst.tol if tol is None else tol
    cols = list(range(len(inst.states))) if states is None else inst.A.idx(states)
    cols = sorted(cols)
    if not cols:
        return []
    M = inst.K[:, cols].T
    group = _pairs_close(M, tol)
    points = []
    for g in np.unique(group):
        members = [cols[m] for m in np.flatnonzero(group == g)]
        first = members[0]
        points.append(
            MartinPoint(
                "K[%s]" % inst.states[first],
                inst.K[:, first].copy(),
                [inst.states[m] for m in members],
            )
        )
    points.sort(key=lambda pt: inst.index[pt.witnesses[0]])
    return points


@dataclass
class BoundaryFamily:
    """Named boundary points tabulated on a window of states.

    ``rep_sequences[name]`` lists states whose Martin columns approach the
    point; ``accumulation`` holds ``(names, limit)`` pairs declaring that the
    points ``names`` converge to ``limit``. ``core`` is the sub-window on which
    convergence is checked (defaults to the whole window) and
    ``column_states`` selects ambient states whose Martin columns join the
    point set alongside the family.
    """

    window: list
    points: dict
    rep_sequences: dict = field(default_factory=dict)
    accumulation: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    core: list | None = None
    column_states: list | None = None

    def __post_init__(self):
        self.window = [str(s) for s in self.window]
        self.points = {
            str(k): np.asarray(v, dtype=float) for k, v in self.points.items()
        }
        for name, v in self.points.items():
            if v.shape != (len(self.window),):
                raise ValueError("point %r is not tabulated on the window" % name)
        self.rep_sequences = {
            str(k): [str(s) for s in v] for k, v in self.rep_sequences.items()
        }
        self.accumulation = [
            ([str(n) for n in names], str(limit)) for names, limit in self.accumulation
        ]
        if self.core is not None:
            self.core = [str(s) for s in self.core]
        if self.column_states is not None:
            self.column_states = [str(s) for s in self.column_states]

    def core_positions(self):
        pos = {s: k for k, s in enumerate(self.window)}
        labels = self.window if self.core is None else self.core
        return [pos[s] for s in labels]

    def validate(self, inst):
        """Check normalisation, rep-sequence fit and accumulation consistency.

        Returns a list of problems; empty means the family is consistent with
        the instance at the family tolerance.
        """
        problems = []
        win = inst.A.idx(self.window)
        core = self.core_positions()
        if inst.basepoint in self.window:
            bpos = self.window.index(inst.basepoint)
            for name, v in self.points.items():
                if not close(v[bpos], 0.0, self.tol):
                    problems.append("%s is %g at the basepoint" % (name, v[bpos]))
        for name, seq in self.rep_sequences.items():
            if name not in self.points:
                problems.append("rep sequence for unknown point %s" % name)
                continue
            col = inst.K[win, inst.index[seq[-1]]]
            err = _sup_gap(col[core], self.points[name][core])
            if err > self.tol:
                problems.append("%s misfits its rep sequence by %g" % (name, err))
        for names, limit in self.accumulation:
            missing = [n for n in names + [limit] if n not in self.points]
            if missing:
                continue
            err = _sup_gap(self.points[names[-1]][core], self.points[limit][core])
            if err > self.tol:
                problems.append("%s is %g away from the tail of its sequence" % (limit, err))
        return problems


def _sup_gap(a, b):
    same = close(a, b, 0.0)
    if same.all():
        return 0.0
    with np.errstate(invalid="ignore"):
        d = np.abs(a[~same] - b[~same])
    return float(np.nanmax(np.where(np.isnan(d), np.inf, d)))


@dataclass
class PointSet:
    """Finite surrogate for the union of Martin columns and boundary points.

    ``vectors[p]`` is point ``p`` on ``window`` (instance state indices).
    ``witnesses[p]`` are state indices whose column equals the point;
    ``rep[p]`` is an index sequence approaching it (possibly empty).
    """

    window: list
    names: list
    vectors: np.ndarray
    witnesses: list
    rep: list
    accumulation: list = field(default_factory=list)

    def __post_init__(self):
        self.pos = {n: k for k, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def vector(self, name):
        return self.vectors[self.pos[name]]

    def pairs(self):
        return [(self.vectors[k], n) for k, n in enumerate(self.names)]


def build_point_set(inst, family=None, column_states=None, tol=None):
    """Merge finite Martin columns and family points into one deduplicated set.

    Without a family every state contributes its column and the window is all
    states. With a family the window is the family window and only
    ``column_states`` (default ``family.column_states``) contribute columns.
    A family point equal to a column on the window absorbs its witnesses and
    takes the family name.
    """
    tol = inst.tol if tol is None else tol
    if family is None:
        window = list(range(len(inst.states)))
        if column_states is None:
            column_states = list(inst.states)
    else:
        window = inst.A.idx(family.window)
        if column_states is None:
            column_states = family.column_states or []
    names, vecs, wits, reps = [], [], [], []
    for pt in finite_martin_space(inst, column_states, tol):
        names.append(pt.name)
        vecs.append(pt.vector[window])
        wits.append(inst.A.idx(pt.witnesses))
        reps.append([])
    accumulation = []
    if family is not None:
        ftol = max(tol, family.tol)
        ncols = len(vecs)
        colmat = np.array(vecs, dtype=float).reshape(ncols, len(window))
        for name, v in family.points.items():
            seq = inst.A.idx(family.rep_sequences.get(name, []))
            hit = None
            if ncols:
                match = np.flatnonzero(np.all(close(colmat, v[None, :], ftol), axis=1))
                if match.size:
                    hit = int(match[0])
            if hit is None:
                for k in range(ncols, len(vecs)):
                    if np.all(close(vecs[k], v, ftol)):
                        hit = k
                        break
            if hit is None:
                names.append(name)
                vecs.append(v.copy())
                wits.append([])
                reps.append(seq)
            else:
                names[hit] = name
                reps[hit] = reps[hit] or seq
        accumulation = [(list(n), lim) for n, lim in family.accumulation]
    vectors = np.array(vecs, dtype=float).reshape(len(vecs), len(window))
    return PointSet(window, names, vectors, wits, reps, accumulation)


def _approach(ps, name):
    """Witness indices and (if long enough) a proper representative sequence."""
    k = ps.pos[name]
    wit = list(ps.witnesses[k])
    seq = list(ps.rep[k])
    if len(seq) < TAIL:
        wit += seq
        seq = []
    return wit, seq


def h_flat(inst, ps, z, w, tol=None):
    """``H-flat(z, w)``: limsup over approaches to z of liminf over approaches to w.

    Approaches are the witnesses of a point (exact) and its representative
    sequence (read off by :func:`tail_limit`; the outer sequence uses its
    first half so that inner indices run well past outer ones).
    """
    tol = inst.tol if tol is None else tol
    S, P, b = inst.Astar.weights, inst.Aplus.weights, inst.b
    wz, sz = _approach(ps, z)
    ww, sw = _approach(ps, w)

    def inner(i):
        vals = [S[b, i] + P[i, j] - S[b, j] for j in ww]
        if sw:
            vals.append(tail_limit([S[b, i] + P[i, j] - S[b, j] for j in sw], tol))
        return min(vals) if vals else NEG_INF

    outer = [inner(i) for i in wz]
    if sz:
        head = sz[: max(TAIL, len(sz) // 2)]
        outer.append(tail_limit([inner(i) for i in head], tol))
    return max(outer) if outer else NEG_INF


def minimal_martin_space(inst, ps, tol=None):
    """Names of points with ``H-flat(w, w) = 0`` within tolerance."""
    tol = inst.tol if tol is None else tol
    return [n for n in ps.names if close(h_flat(inst, ps, n, n, tol), 0.0, tol)]
