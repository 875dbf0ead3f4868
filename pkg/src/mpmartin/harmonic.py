"""Harmonicity, superharmonicity and representation checks.

Every check returns a :class:`Report` holding the full residual vector, so
callers can inspect where and by how much a verdict fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptySupport
from .semiring import DEFAULT_TOL, NEG_INF, mat_vec


def residual(a, b):
    """``a - b`` in extended reals with ``(-inf) - (-inf) = 0``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        r = a - b
    both = np.isneginf(a) & np.isneginf(b)
    return np.where(both, 0.0, r)


@dataclass
class Report:
    kind: str
    labels: list
    residuals: np.ndarray
    verdict: bool
    tol: float
    window: bool = False
    notes: dict = field(default_factory=dict)

    def failures(self):
        """Labels whose residual breaks the verdict, worst first."""
        r = self.residuals
        if self.kind == "superharmonic":
            bad = r < -self.tol
            order = np.argsort(r)
        else:
            bad = ~(np.abs(r) <= self.tol)
            order = np.argsort(-np.abs(np.nan_to_num(r, nan=np.inf)))
        return [self.labels[i] for i in order if bad[i]]

    def worst(self):
        r = self.residuals
        if r.size == 0:
            return 0.0
        if self.kind == "superharmonic":
            return float(r.min())
        return float(r[np.argmax(np.abs(r))])


def _labels(A, n, labels):
    if labels is not None:
        return list(labels)
    states = getattr(A, "states", None)
    return list(states) if states is not None else [str(i) for i in range(n)]


def _harmonic_residuals(A, u, states):
    W = A.weights if hasattr(A, "weights") else np.asarray(A, dtype=float)
    u = np.asarray(u, dtype=float)
    if W.shape[1] != u.shape[0] or W.shape[0] != u.shape[0]:
        raise DimensionMismatch("kernel is %s, vector has %d entries" % (W.shape, u.shape[0]))
    rows = np.arange(u.shape[0]) if states is None else np.asarray(states, dtype=int)
    Au = mat_vec(W[rows], u)
    return rows, residual(u[rows], Au)


def is_harmonic(A, u, tol=DEFAULT_TOL, states=None):
    """Residuals ``u_i - max_j (A_ij + u_j)``; harmonic iff all lie in [-tol, tol].

    ``states`` restricts the check to the given indices (a window verdict).
    """
    rows, r = _harmonic_residuals(A, u, states)
    labels = _labels(A, len(u), None)
    ok = bool(np.all(np.abs(r) <= tol))
    return Report("harmonic", [labels[i] for i in rows], r, ok, tol, window=states is not None)


def is_superharmonic(A, u, tol=DEFAULT_TOL, states=None):
    """One-sided version of :func:`is_harmonic`: residual >= -tol everywhere."""
    rows, r = _harmonic_residuals(A, u, states)
    labels = _labels(A, len(u), None)
    ok = bool(np.all(r >= -tol))
    return Report("superharmonic", [labels[i] for i in rows], r, ok, tol, window=states is not None)


@dataclass
class Measure:
    """Max-plus measure given by its density on named points."""

    density: dict
    domain: str = "points"

    def __getitem__(self, name):
        return self.density.get(name, NEG_INF)

    def values(self, names):
        return np.array([self[n] for n in names], dtype=float)

    def support(self):
        return [n for n, v in self.density.items() if v > NEG_INF]


def sup_expression(points, mu):
    """``max over points xi of xi + mu(xi)`` as a vector."""
    if isinstance(mu, Measure):
        mu = mu.density
    vecs = [np.asarray(v, dtype=float) for v, _ in points]
    if not vecs:
        raise EmptySupport("no points")
    out = np.full(vecs[0].shape, NEG_INF)
    for v, name in points:
        m = mu.get(name, NEG_INF)
        if m > NEG_INF:
            np.maximum(out, np.asarray(v, dtype=float) + m, out=out)
    return out


def represents(points, mu, u, tol=DEFAULT_TOL, labels=None, window=False):
    """Does ``mu`` represent ``u``, i.e. ``u = max_xi xi + mu(xi)``?

    ``points`` is a sequence of ``(vector, name)`` aligned with ``u``. Pass
    ``window=True`` when the vectors are tabulated on a finite window of a
    larger space: the verdict then only speaks for that window.
    """
    density = mu.density if isinstance(mu, Measure) else mu
    names = [n for _, n in points]
    if not any(density.get(n, NEG_INF) > NEG_INF for n in names):
        raise EmptySupport("measure is -inf on every point")
    u = np.asarray(u, dtype=float)
    s = sup_expression(points, density)
    if s.shape != u.shape:
        raise DimensionMismatch("points have %d entries, u has %d" % (s.shape[0], u.shape[0]))
    r = residual(u, s)
    ok = bool(np.all(np.abs(r) <= tol))
    labs = labels if labels is not None else [str(i) for i in range(u.shape[0])]
    return Report("represents", list(labs), r, ok, tol, window=window)
