import numpy as np
import pytest

from mpmartin import Kernel, MartinInstance, kleene_star

NEG = -np.inf

# Every entry is a multiple of 1/16, so sums of a few dozen entries are exact
# in floating point and closure identities can be compared with ==.
STEP = 1.0 / 16


def dyadic_kernel(rng, n, p_edge=0.5, zero_diagonal=False, low=-5.0):
    W = rng.integers(int(low / STEP), 1, size=(n, n)) * STEP
    W = np.where(rng.random((n, n)) < p_edge, W, NEG)
    if zero_diagonal:
        np.fill_diagonal(W, 0.0)
    return Kernel([str(k) for k in range(n)], W)


def make_accessible(rng, A, base=0):
    """Add basepoint edges until every state is reachable from ``base``."""
    W = np.array(A.weights)
    star = kleene_star(Kernel(A.states, W)).weights
    for j in np.flatnonzero(np.isneginf(star[base])):
        W[base, j] = rng.integers(-80, 1) * STEP
    return Kernel(A.states, W)


def random_instance(rng, n_max=7, zero_diagonal=True):
    n = int(rng.integers(1, n_max + 1))
    A = make_accessible(rng, dyadic_kernel(rng, n, zero_diagonal=zero_diagonal))
    return MartinInstance(A, "0")


def column_mix(rng, inst, k_max=3):
    """Max-plus combination of 1 to ``k_max`` Martin columns with dyadic weights."""
    n = len(inst.states)
    cols = rng.choice(n, size=min(n, int(rng.integers(1, k_max + 1))), replace=False)
    u = np.full(n, NEG)
    for j in cols:
        u = np.maximum(u, inst.K[:, j] + rng.integers(-32, 33) * STEP)
    return u, cols


def walk_oracle(W, max_len=16):
    """Best weight of walks with 1..max_len steps, by explicit layer-by-layer relaxation."""
    n = W.shape[0]
    best = np.full((n, n), NEG)
    layer = np.array(W, dtype=float)
    for _ in range(max_len):
        best = np.maximum(best, layer)
        nxt = np.full((n, n), NEG)
        for i in range(n):
            for k in range(n):
                if layer[i, k] == NEG:
                    continue
                for j in range(n):
                    if W[k, j] > NEG:
                        nxt[i, j] = max(nxt[i, j], layer[i, k] + W[k, j])
        layer = nxt
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def two_state():
    # A = [[-inf, -1], [-2, -inf]] with basepoint "1"
    A = Kernel(["1", "2"], [[NEG, -1.0], [-2.0, NEG]])
    return MartinInstance(A, "1")


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
