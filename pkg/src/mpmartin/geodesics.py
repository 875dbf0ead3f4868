"""Almost-geodesics: parameter certification, change of basepoint, and the
inductive construction of a u-relative almost-geodesic from a harmonic vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BrokenPath, EmptyZ, HorizonExhausted, NotHarmonic, NotSuperharmonic, Unreachable
from .harmonic import is_harmonic, is_superharmonic
from .kernels import build_point_set
from .measures import mu_max
from .semiring import DEFAULT_TOL, NEG_INF, best_walk

KINDS = ("kernel", "u_relative", "metric")


@dataclass
class GeodesicCertificate:
    path: list
    kind: str
    beta: float
    reference: str
    checks: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown certificate kind %r" % self.kind)


def _indices(kernel, path):
    return [kernel.index[str(s)] if isinstance(s, str) else int(s) for s in path]


def step_weights(W, path):
    """Weights of consecutive steps; raises :class:`BrokenPath` on a -inf step."""
    steps = np.array([W[a, c] for a, c in zip(path[:-1], path[1:])], dtype=float)
    if np.isneginf(steps).any():
        k = int(np.flatnonzero(np.isneginf(steps))[0])
        raise BrokenPath("no transition at step %d of the path" % k)
    return steps


def prefix_weights(W, path):
    """``W_l`` = total weight of the first ``l`` steps, for ``l = 0..len(path)-1``."""
    return np.concatenate([[0.0], np.cumsum(step_weights(W, path))])


def min_parameter_kernel(inst, path):
    """Least beta with ``A*[b, i_l] <= beta + A*[b, i_0] + W_l`` for every prefix."""
    p = _indices(inst.A, path)
    row = inst.Astar.weights[inst.b]
    W = prefix_weights(inst.A.weights, p)
    return float(np.max(row[p] - row[p[0]] - W))


def min_parameter_u(A, u, path):
    """Least beta with ``u[i_0] <= beta + W_l + u[i_l]`` for every prefix."""
    p = _indices(A, path)
    u = np.asarray(u, dtype=float)
    W = prefix_weights(A.weights, p)
    if np.isneginf(u[p]).any() and not np.isneginf(u[p[0]]):
        raise BrokenPath("path leaves the support of u")
    if np.isneginf(u[p[0]]):
        return NEG_INF
    return float(np.max(u[p[0]] - W - u[p]))


def rebase(inst, path, beta, new_base):
    """Parameter of the same almost-geodesic when ``new_base`` is the basepoint.

    ``beta + A*[b, i_0] - A*[b, j] - A*[j, i_0]``; valid but not necessarily least.
    """
    S = inst.Astar.weights
    i0 = _indices(inst.A, path)[0]
    j = inst.index[str(new_base)]
    if S[j, i0] == NEG_INF:
        raise Unreachable("%s cannot reach %s" % (new_base, inst.states[i0]))
    return float(beta + S[inst.b, i0] - S[inst.b, j] - S[j, i0])


def min_parameter_at(inst, path, base):
    """Least kernel parameter of ``path`` taking ``base`` as basepoint."""
    p = _indices(inst.A, path)
    row = inst.Astar.weights[inst.index[str(base)]]
    W = prefix_weights(inst.A.weights, p)
    if row[p[0]] == NEG_INF:
        raise Unreachable("%s cannot reach %s" % (base, inst.states[p[0]]))
    with np.errstate(invalid="ignore"):
        vals = row[p] - row[p[0]] - W
    return float(np.max(vals))


@dataclass
class LemmaACheck:
    slacks: np.ndarray
    ok: bool

    @property
    def worst(self):
        return float(self.slacks.min())


def lemmaA_check(inst, path, beta, xi, tol=DEFAULT_TOL):
    """Check ``xi(i_0) <= W_n + xi(i_n) + beta`` along the path.

    ``xi`` is a vector over all instance states.
    """
    p = _indices(inst.A, path)
    xi = np.asarray(xi, dtype=float)
    W = prefix_weights(inst.A.weights, p)
    with np.errstate(invalid="ignore"):
        slack = W + xi[p] + beta - xi[p[0]]
    slack = np.where(np.isneginf(xi[p[0]]), np.inf, slack)
    return LemmaACheck(slack, bool(np.all(slack >= -tol)))


def lemmaB_gap(inst, u, j, xi, mumax):
    """``u_j - xi(j) - mu_max(xi)``: least parameter of u-almost-geodesics from j to xi."""
    jj = inst.index[str(j)] if isinstance(j, str) else int(j)
    u = np.asarray(u, dtype=float)
    return float(u[jj] - xi[jj] - mumax)


def certify_kernel(inst, path, tol=DEFAULT_TOL):
    beta = min_parameter_kernel(inst, path)
    return GeodesicCertificate(
        [inst.states[i] for i in _indices(inst.A, path)],
        "kernel",
        beta,
        inst.basepoint,
        {"prefix_ok": True},
    )


def certify_u(A, u, path):
    beta = min_parameter_u(A, u, path)
    return GeodesicCertificate(
        [A.states[i] for i in _indices(A, path)], "u_relative", beta, "u", {"prefix_ok": True}
    )


def witness_geodesic(
    inst,
    u,
    j0,
    delta0,
    eps0=1.0,
    horizon=100,
    visit_order=None,
    interior=None,
    tol=DEFAULT_TOL,
    require_full_round=False,
    shrink="slow",
):
    """Build a u-relative almost-geodesic with parameter ``delta0`` from ``j0``.

    Each step forms the candidate set Z (states whose ``k(i, .)`` stays within
    ``eps_n`` of ``k(i, j_n)`` on every visited ``i`` and that are reachable
    from ``j_n`` losing less than ``delta_n``), picks the candidate best for
    the currently visited state, joins the two by a heaviest walk, and shrinks
    ``eps``/``delta`` below their admissible bounds. ``interior`` lists state indices
    where harmonicity is required (default all).

    Each new ``eps``/``delta`` must lie strictly below its bound. ``shrink="half"``
    takes half the bound; ``"slow"`` (default) takes ``bound * (1 - 1/(n+2)^2)``,
    whose running product stays above one half, so the bounds do not sink
    below float resolution over long horizons.
    """
    if shrink not in ("slow", "half"):
        raise ValueError("shrink must be 'slow' or 'half'")
    A, S, P = inst.A.weights, inst.Astar.weights, inst.Aplus.weights
    u = np.asarray(u, dtype=float)
    sup = is_superharmonic(inst.A, u, tol)
    if not sup.verdict:
        raise NotSuperharmonic(sup)
    harm = is_harmonic(inst.A, u, tol, interior)
    if not harm.verdict:
        raise NotHarmonic(harm)
    n_states = len(inst.states)
    order = list(range(n_states)) if visit_order is None else _indices(inst.A, visit_order)
    j = inst.index[str(j0)] if isinstance(j0, str) else int(j0)
    if not np.isfinite(u[j]):
        raise ValueError("u must be finite at the starting state")
    eps, delta = float(eps0), float(delta0)
    if eps <= 0 or delta <= 0:
        raise ValueError("eps0 and delta0 must be positive")

    with np.errstate(invalid="ignore"):
        k = S + u[None, :]
    visited = []
    path = [j]
    js = [j]
    for n in range(horizon):
        i_n = order[n % len(order)]
        # Step 1: a visited i with k(i, j) = -inf imposes no constraint
        ok = P[j] + u > u[j] - delta
        for i in visited:
            if k[i, j] > NEG_INF:
                ok &= k[i] > k[i, j] - eps
        Z = np.flatnonzero(ok)
        if Z.size == 0:
            raise EmptyZ("no admissible successor at step %d from %s" % (n, inst.states[j]))
        # Step 2: an exact argmax is within any slack of the sup
        s = int(Z[np.argmax(k[i_n, Z])])
        # Step 3
        walk, weight = best_walk(A, j, s, min_length=1)
        if not walk or not weight > u[j] - u[s] - delta:
            raise EmptyZ("no connecting walk from %s to %s" % (inst.states[j], inst.states[s]))
        # Step 4
        bounds = [eps + k[i, s] - k[i, j] for i in visited if k[i, j] > NEG_INF]
        factor = 0.5 if shrink == "half" else 1.0 - 1.0 / (n + 2) ** 2
        if bounds:
            eps = factor * min(bounds)
        delta = factor * (delta + u[s] - u[j] + weight)
        if i_n not in visited:
            visited.append(i_n)
        path.extend(walk[1:])
        j = s
        js.append(j)

    beta = min_parameter_u(inst.A, u, path)
    labels = [inst.states[i] for i in path]
    cert = GeodesicCertificate(
        labels,
        "u_relative",
        beta,
        "u",
        {
            "prefix_ok": bool(beta <= delta0 + tol),
            "delta0": float(delta0),
            "endpoint": inst.states[path[-1]],
            "anchors": [inst.states[i] for i in js],
            "final_eps": eps,
            "final_delta": delta,
        },
    )
    # the endpoint's Martin column stands in for the limit point at finite horizon
    end = path[-1]
    ps = build_point_set(inst, None, None, tol)
    name = next(nm for nm, w in zip(ps.names, ps.witnesses) if end in w)
    mm = mu_max(inst, u, ps, name, tol)
    cert.checks["target_point"] = name
    cert.checks["gap"] = lemmaB_gap(inst, u, path[0], inst.K[:, end], mm)
    if require_full_round and horizon < len(set(order)):
        raise HorizonExhausted(cert, "horizon %d does not visit every state once" % horizon)
    return cert
