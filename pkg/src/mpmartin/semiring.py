"""Max-plus scalars, kernels and their Kleene closures.

Scalars are float64 with ``-inf`` as the max-plus zero. ``+inf`` is never
stored: a closure that would contain it raises :class:`DivergentStar`.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import DimensionMismatch, DivergentStar

NEG_INF = -np.inf
DEFAULT_TOL = 1e-9


class Kernel:
    """Square max-plus matrix indexed by string state labels.

    ``weights[i, j]`` is the reward for passing from ``states[i]`` to
    ``states[j]``; ``-inf`` means no transition. Instances are immutable.
    """

    __slots__ = ("states", "weights", "index")

    def __init__(self, states, weights):
        states = tuple(str(s) for s in states)
        if len(set(states)) != len(states):
            raise ValueError("state labels must be unique")
        w = np.array(weights, dtype=float)
        if w.ndim != 2 or w.shape != (len(states), len(states)):
            raise DimensionMismatch(
                "weights shape %s does not match %d states" % (w.shape, len(states))
            )
        if np.isnan(w).any() or np.isposinf(w).any():
            raise ValueError("kernel entries must be real or -inf")
        w.setflags(write=False)
        self.states = states
        self.weights = w
        self.index = {s: i for i, s in enumerate(states)}

    @classmethod
    def from_entries(cls, states, entries):
        """Build from ``(i_label, j_label, weight)`` triples; absent pairs are -inf."""
        states = [str(s) for s in states]
        index = {s: i for i, s in enumerate(states)}
        w = np.full((len(states), len(states)), NEG_INF)
        for i, j, value in entries:
            w[index[str(i)], index[str(j)]] = float(value)
        return cls(states, w)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return "Kernel(%d states)" % len(self.states)

    def __eq__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        return self.states == other.states and np.array_equal(self.weights, other.weights)

    __hash__ = None

    def entries(self):
        """Yield ``(i_label, j_label, weight)`` for every finite entry."""
        rows, cols = np.nonzero(self.weights > NEG_INF)
        for i, j in zip(rows, cols):
            yield self.states[i], self.states[j], float(self.weights[i, j])

    def idx(self, labels):
        return [self.index[str(s)] for s in labels]

    def restrict(self, labels):
        ix = self.idx(labels)
        return Kernel([self.states[i] for i in ix], self.weights[np.ix_(ix, ix)])

    def with_zero_diagonal(self):
        w = self.weights.copy()
        np.fill_diagonal(w, np.maximum(np.diag(w), 0.0))
        return Kernel(self.states, w)

    def vector(self, mapping, default=NEG_INF):
        """Align a ``label -> value`` mapping with the state order."""
        v = np.full(len(self.states), default, dtype=float)
        for label, value in mapping.items():
            v[self.index[str(label)]] = float(value)
        return v


def _as_matrix(A):
    return A.weights if isinstance(A, Kernel) else np.asarray(A, dtype=float)


def identity(n):
    e = np.full((n, n), NEG_INF)
    np.fill_diagonal(e, 0.0)
    return e


def oplus(a, b):
    return np.maximum(a, b)


def mat_vec(A, u):
    """Max-plus product ``(A u)_i = max_j A_ij + u_j``."""
    W = _as_matrix(A)
    u = np.asarray(u, dtype=float)
    if W.shape[1] != u.shape[0]:
        raise DimensionMismatch("kernel has %d columns, vector has %d" % (W.shape[1], u.shape[0]))
    if W.shape[1] == 0:
        return np.full(W.shape[0], NEG_INF)
    return np.max(W + u[None, :], axis=1)


def mat_mat(A, B):
    """Max-plus product of two matrices (or kernels); returns an ndarray."""
    X, Y = _as_matrix(A), _as_matrix(B)
    if X.shape[1] != Y.shape[0]:
        raise DimensionMismatch("inner dimensions %d and %d differ" % (X.shape[1], Y.shape[0]))
    out = np.full((X.shape[0], Y.shape[1]), NEG_INF)
    for k in range(X.shape[1]):
        np.maximum(out, X[:, k, None] + Y[None, k, :], out=out)
    return out


@numba.njit(cache=True)
def _floyd_warshall(D):
    n = D.shape[0]
    for k in range(n):
        rk = D[k]
        for i in range(n):
            dik = D[i, k]
            if dik == -np.inf:
                continue
            ri = D[i]
            if dik == np.inf:
                # only reachable under a positive cycle; keep +inf from producing nan
                for j in range(n):
                    if rk[j] > -np.inf:
                        ri[j] = np.inf
                continue
            for j in range(n):
                ri[j] = max(ri[j], dik + rk[j])
    return D


def _positive_cycle(W, tol):
    """Find one cycle of weight > tol by longest-path Bellman-Ford, or None."""
    n = W.shape[0]
    dist = np.zeros(n)
    pred = np.full(n, -1)
    cols = np.arange(n)
    last = -1
    for _ in range(n + 1):
        cand = dist[:, None] + W
        best_u = np.argmax(cand, axis=0)
        best = cand[best_u, cols]
        improve = best > dist + tol
        if not improve.any():
            return None
        dist[improve] = best[improve]
        pred[improve] = best_u[improve]
        last = int(np.flatnonzero(improve)[0])
    v = last
    for _ in range(n):
        if pred[v] < 0:
            return None
        v = int(pred[v])
    cycle = [v]
    w = int(pred[v])
    while w != v:
        cycle.append(w)
        w = int(pred[w])
    cycle.reverse()
    return cycle


def _cycle_weight(W, cycle):
    return float(sum(W[cycle[k], cycle[(k + 1) % len(cycle)]] for k in range(len(cycle))))


def closure_plus(W, tol=DEFAULT_TOL):
    """Floyd-Warshall over (max, +) on a raw matrix; returns (A+, divergent mask or None)."""
    W = np.asarray(W, dtype=float)
    D = _floyd_warshall(np.array(W, dtype=float, copy=True))
    positive = np.diag(D) > tol
    if not positive.any():
        return D, None
    reach = (D > NEG_INF).astype(np.int64)
    divergent = (reach[:, positive] @ reach[positive, :]) > 0
    return D, divergent


def kleene_plus(A, tol=DEFAULT_TOL):
    """Closure ``A+``: best weight of a path of length at least one.

    Raises :class:`DivergentStar` with one witness cycle if any entry is +inf.
    """
    D, divergent = closure_plus(A.weights, tol)
    if divergent is not None:
        cycle = _positive_cycle(A.weights, tol)
        if cycle is None:
            k = int(np.argmax(np.diag(D)))
            cycle = [k]
        raise DivergentStar(
            [A.states[c] for c in cycle], _cycle_weight(A.weights, cycle), divergent
        )
    return Kernel(A.states, D)


def star_from_plus(Aplus):
    D = np.array(Aplus.weights, copy=True)
    np.fill_diagonal(D, 0.0)
    return Kernel(Aplus.states, D)


def kleene_star(A, tol=DEFAULT_TOL):
    """Closure ``A* = I (+) A+`` with the diagonal forced to 0."""
    return star_from_plus(kleene_plus(A, tol))


def best_walk(W, src, dst, min_length=1, max_length=None):
    """Heaviest walk ``src -> dst`` with ``min_length <= hops <= max_length``.

    Layered dynamic programming over hop counts, so zero-weight cycles never
    trap the reconstruction. ``max_length`` defaults to the number of states,
    which suffices when no positive cycle exists. Returns ``(indices, weight)``;
    the walk is empty with weight -inf when ``dst`` is unreachable.
    """
    W = _as_matrix(W)
    n = W.shape[0]
    L = n if max_length is None else max_length
    L = max(L, min_length)
    layers = np.full((L + 1, n), NEG_INF)
    preds = np.full((L + 1, n), -1, dtype=np.int64)
    layers[0, src] = 0.0
    for h in range(1, L + 1):
        cand = layers[h - 1][:, None] + W
        p = np.argmax(cand, axis=0)
        layers[h] = cand[p, np.arange(n)]
        preds[h] = p
    hops = np.arange(min_length, L + 1)
    vals = layers[min_length:, dst]
    if not np.isfinite(vals).any():
        return [], NEG_INF
    h = int(hops[int(np.argmax(vals))])
    walk = [dst]
    v = dst
    for layer in range(h, 0, -1):
        v = int(preds[layer, v])
        walk.append(v)
    walk.reverse()
    return walk, float(layers[h, dst])
