"""Worked examples with known answers, tabulated on finite windows.

``example1`` is the quarter-plane walk whose minimum measure charges a
point that ``m_u`` kills; ``example2`` is the harmonic vector whose minimum
measure charges a non-minimal point. ``metric_templates`` provides small
graphs (lines, a quadrant grid, a star tree) with geodesic rays and their
Busemann functions in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownTemplate
from .kernels import BoundaryFamily, MartinInstance
from .metric import graph_metric
from .semiring import NEG_INF, Kernel


def label(x, y):
    return "%d,%d" % (x, y)


def _delta(a, b):
    return 1.0 if a == b else 0.0


def a_n(n, x, y):
    return -abs(x - n) + (2 * _delta(x, n) - 1) * abs(y - 1) - 2 * _delta(x, n) * _delta(y, 0) + n + 1


def b0(x, y):
    return float(x - y)


def b1(x, y):
    return float(x - abs(y - 1) + 1)


def u1(x, y):
    return float(x - y) if y <= 1 else float(x + y - 4)


@dataclass
class Example:
    inst: MartinInstance
    u: np.ndarray
    family: BoundaryFamily
    interior: list = field(default_factory=list)
    edge: list = field(default_factory=list)
    expected: dict = field(default_factory=dict)


def example1_edges(X, Y):
    """Unit-cost moves: vertical everywhere, horizontal on rows 0 and 1."""
    edges = []
    for x in range(X + 1):
        for y in range(Y + 1):
            if y < Y:
                edges.append((label(x, y), label(x, y + 1)))
            if y <= 1 and x < X:
                edges.append((label(x, y), label(x + 1, y)))
    return edges


def example1(X=40, Y=40, N=25, tol=1e-9):
    """Quarter-plane example on the box ``0 <= x <= X, 0 <= y <= Y``.

    Every path between box states stays optimal inside the box, so the
    closure and the Martin kernel are exact on it.
    """
    if X < N + 2 or Y < 3:
        raise ValueError("need X >= N + 2 and Y >= 3")
    states = [label(x, y) for x in range(X + 1) for y in range(Y + 1)]
    entries = []
    for a, c in example1_edges(X, Y):
        entries += [(a, c, -1.0), (c, a, -1.0)]
    inst = MartinInstance(Kernel.from_entries(states, entries), label(0, 0), tol)
    xy = [(x, y) for x in range(X + 1) for y in range(Y + 1)]
    u = np.array([u1(x, y) for x, y in xy])
    points = {"a%d" % n: [a_n(n, x, y) for x, y in xy] for n in range(N + 1)}
    points["b0"] = [b0(x, y) for x, y in xy]
    points["b1"] = [b1(x, y) for x, y in xy]
    reps = {"a%d" % n: [label(n, m) for m in range(Y + 1)] for n in range(N + 1)}
    reps["b0"] = [label(w, 0) for w in range(X + 1)]
    reps["b1"] = [label(w, 1) for w in range(X + 1)]
    interior = [label(x, y) for x, y in xy if x < X and y < Y]
    edge = [label(x, y) for x, y in xy if x == X or y == Y]
    accumulation = [(["a%d" % n for n in range(N + 1)], "b1")]
    for n in range(N + 1):
        accumulation.append((["K[%s]" % label(n, m) for m in range(Y)], "a%d" % n))
    accumulation.append((["K[%s]" % label(w, 0) for w in range(X)], "b0"))
    accumulation.append((["K[%s]" % label(w, 1) for w in range(X)], "b1"))
    family = BoundaryFamily(
        window=states,
        points=points,
        rep_sequences=reps,
        accumulation=accumulation,
        tol=tol,
        core=[label(x, y) for x, y in xy if x <= N - 3],
        column_states=interior,
    )
    expected = {
        "mumax": {**{"a%d" % n: -4.0 for n in range(N + 1)}, "b0": 0.0, "b1": -2.0},
        "m_u": {**{"a%d" % n: -4.0 for n in range(N + 1)}, "b0": 0.0, "b1": NEG_INF},
        "mumin": {**{"a%d" % n: -4.0 for n in range(N + 1)}, "b0": 0.0, "b1": -4.0},
    }
    return Example(inst, u, family, interior, edge, expected)


def example2_weight(i, j):
    """Transition weight; ``None`` stands for the state at infinity."""
    if j is not None and (i is None or j <= i):
        return (0.0 if i is None else 1.0 / i) - 1.0 / j
    if i == 1 and j is None:
        return -1.0
    return NEG_INF


def example2_K(i, j):
    inv_i = 0.0 if i is None else 1.0 / i
    if i is None or (j is not None and j <= i):
        return inv_i
    return inv_i - 2.0


def example2(J=100, tol=1e-9):
    """Example on ``{1, ..., J} u {inf}`` with basepoint ``inf`` and ``u = 0``.

    Optimal paths between window states never need states beyond ``J``, so
    the closure is exact on the window.
    """
    if J < 3:
        raise ValueError("need J >= 3")
    keys = list(range(1, J + 1)) + [None]
    states = [str(k) if k is not None else "inf" for k in keys]
    W = np.array([[example2_weight(i, j) for j in keys] for i in keys])
    inst = MartinInstance(Kernel(states, W), "inf", tol)
    u = np.zeros(len(states))
    points = {"K[%s]" % s: [example2_K(i, j) for i in keys] for s, j in zip(states, keys)}
    reps = {"K[%s]" % s: [s] for s in states}
    family = BoundaryFamily(
        window=states,
        points=points,
        rep_sequences=reps,
        accumulation=[(["K[%d]" % j for j in range(1, J + 1)], "K[inf]")],
        tol=tol,
        core=[str(j) for j in range(1, J - 2)] + ["inf"],
        column_states=states,
    )
    expected = {"mumax": {"K[%s]" % s: (0.0 if j is None else -1.0 / j) for s, j in zip(states, keys)}}
    return Example(inst, u, family, states[:-1], ["inf"], expected)


@dataclass
class MetricTemplate:
    name: str
    metric: object
    window: list
    rays: dict
    busemann: dict
    nodes: list
    edges: list


def _half_line(N):
    nodes = [str(k) for k in range(N + 1)]
    edges = [(str(k), str(k + 1), 1.0) for k in range(N)]
    window = [str(k) for k in range(N // 2 + 1)]
    rays = {"h+": [str(k) for k in range(N + 1)]}
    bus = {"h+": np.array([-float(k) for k in range(N // 2 + 1)])}
    return nodes, edges, "0", window, rays, bus


def _z_line(N):
    nodes = [str(k) for k in range(-N, N + 1)]
    edges = [(str(k), str(k + 1), 1.0) for k in range(-N, N)]
    half = range(-(N // 2), N // 2 + 1)
    window = [str(k) for k in half]
    rays = {"h+": [str(k) for k in range(N + 1)], "h-": [str(-k) for k in range(N + 1)]}
    bus = {"h+": np.array([-float(k) for k in half]), "h-": np.array([float(k) for k in half])}
    return nodes, edges, "0", window, rays, bus


def _grid(N):
    nodes = [label(x, y) for x in range(N + 1) for y in range(N + 1)]
    edges = []
    for x in range(N + 1):
        for y in range(N + 1):
            if x < N:
                edges.append((label(x, y), label(x + 1, y), 1.0))
            if y < N:
                edges.append((label(x, y), label(x, y + 1), 1.0))
    h = N // 2
    pts = [(x, y) for x in range(h + 1) for y in range(h + 1)]
    window = [label(x, y) for x, y in pts]
    rays = {"hx": [label(k, 0) for k in range(N + 1)], "hy": [label(0, k) for k in range(N + 1)]}
    bus = {
        "hx": np.array([float(y - x) for x, y in pts]),
        "hy": np.array([float(x - y) for x, y in pts]),
    }
    return nodes, edges, "0,0", window, rays, bus


def _star_tree(N, arms=3):
    nodes = ["c"] + ["%d:%d" % (a, k) for a in range(arms) for k in range(1, N + 1)]
    edges = []
    for a in range(arms):
        prev = "c"
        for k in range(1, N + 1):
            cur = "%d:%d" % (a, k)
            edges.append((prev, cur, 1.0))
            prev = cur
    window = ["c"] + ["%d:%d" % (a, k) for a in range(arms) for k in range(1, N // 2 + 1)]
    rays, bus = {}, {}
    for a in range(arms):
        rays["arm%d" % a] = ["c"] + ["%d:%d" % (a, k) for k in range(1, N + 1)]
        # down the arm the function falls, elsewhere it grows with distance to the centre
        vals = [0.0]
        for b in range(arms):
            vals += [(-1.0 if b == a else 1.0) * k for k in range(1, N // 2 + 1)]
        bus["arm%d" % a] = np.array(vals)
    return nodes, edges, "c", window, rays, bus


TEMPLATES = {"half_line": _half_line, "z_line": _z_line, "grid": _grid, "star_tree": _star_tree}


def metric_templates(name, size, **kw):
    """Graph, half-size window, geodesic rays and closed-form Busemann functions."""
    if name not in TEMPLATES:
        raise UnknownTemplate(name)
    nodes, edges, base, window, rays, bus = TEMPLATES[name](size, **kw)
    m = graph_metric(nodes, edges, base)
    return MetricTemplate(name, m, window, rays, bus, nodes, edges)
