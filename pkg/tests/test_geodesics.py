import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import NEG, column_mix, random_instance
from mpmartin import (
    BrokenPath,
    EmptyZ,
    HorizonExhausted,
    Kernel,
    MartinInstance,
    NotHarmonic,
    Unreachable,
    build_point_set,
    example1,
    example2,
    lemmaA_check,
    lemmaB_gap,
    min_parameter_kernel,
    min_parameter_u,
    mu_min,
    rebase,
    witness_geodesic,
)
from mpmartin.corpus import a_n, b0, b1, label
from mpmartin.geodesics import GeodesicCertificate, certify_kernel, min_parameter_at
from mpmartin.measures import mu_max


@pytest.fixture(scope="module")
def ex1():
    return example1(12, 12, 8)


def random_walk(rng, A, start, steps):
    path = [start]
    for _ in range(steps):
        nxt = np.flatnonzero(A.weights[path[-1]] > NEG)
        if nxt.size == 0:
            break
        path.append(int(rng.choice(nxt)))
    return path


def test_trivial_path(two_state):
    assert min_parameter_kernel(two_state, ["1"]) == 0.0


def test_two_state_parameter(two_state):
    assert min_parameter_kernel(two_state, ["1", "2", "1"]) == 3.0


def test_broken_path(two_state):
    with pytest.raises(BrokenPath):
        min_parameter_kernel(two_state, ["1", "1"])


def test_row_zero_is_a_geodesic(ex1):
    path = [label(x, 0) for x in range(13)]
    assert min_parameter_kernel(ex1.inst, path) == 0.0


def test_u_parameter_constant_path():
    A = Kernel(["a"], [[0.0]])
    assert min_parameter_u(A, [3.0], ["a", "a", "a"]) == 0.0


def test_u_parameter_on_example2():
    ex = example2(10)
    # steps -1/4, -1/4, -1/2
    assert min_parameter_u(ex.inst.A, ex.u, ["inf", "4", "2", "1"]) == 1.0
    with pytest.raises(BrokenPath):
        min_parameter_u(ex.inst.A, ex.u, ["inf", "1", "2", "4"])


def test_rebase_to_same_base(two_state):
    assert rebase(two_state, ["1", "2"], 0.75, "1") == 0.75


def test_rebase_two_state(two_state):
    assert rebase(two_state, ["1", "2"], 0.5, "2") == 3.5


def test_rebase_unreachable():
    A = Kernel.from_entries(["a", "b"], [("a", "b", -1), ("b", "b", 0)])
    inst = MartinInstance(A, "a")
    with pytest.raises(Unreachable):
        rebase(inst, ["a", "b"], 0.0, "b")


def test_rebase_bound_random(rng):
    for _ in range(30):
        inst = random_instance(rng, zero_diagonal=False)
        path = random_walk(rng, inst.A, inst.b, 6)
        beta = min_parameter_kernel(inst, path)
        for j in range(len(inst.states)):
            if inst.Astar.weights[j, path[0]] == NEG:
                continue
            assert min_parameter_at(inst, path, inst.states[j]) <= rebase(inst, path, beta, inst.states[j])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_prefix_monotone(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, zero_diagonal=False)
    path = random_walk(rng, inst.A, inst.b, 8)
    u = inst.K[:, int(rng.integers(len(inst.states)))]
    for k in range(1, len(path) + 1):
        assert min_parameter_kernel(inst, path[:k]) <= min_parameter_kernel(inst, path)
    if np.isfinite(u[path]).all():
        for k in range(1, len(path) + 1):
            assert min_parameter_u(inst.A, u, path[:k]) <= min_parameter_u(inst.A, u, path)


def test_concatenation_has_finite_parameter(rng):
    for _ in range(20):
        inst = random_instance(rng)
        p = random_walk(rng, inst.A, inst.b, 4)
        q = random_walk(rng, inst.A, p[-1], 4)
        assert np.isfinite(min_parameter_kernel(inst, p + q[1:]))


def test_lemmaA_constant_path():
    inst = MartinInstance(Kernel(["a"], [[0.0]]), "a")
    assert lemmaA_check(inst, ["a", "a"], 0.0, [0.0]).ok


def test_lemmaA_up_a_column(ex1):
    n = 3
    path = [label(n, y) for y in range(13)]
    beta = min_parameter_kernel(ex1.inst, path)
    xi = np.array([a_n(n, *map(int, s.split(","))) for s in ex1.inst.states])
    chk = lemmaA_check(ex1.inst, path, beta, xi)
    assert chk.ok
    assert chk.worst >= 0


def test_lemmaA_random_columns(rng):
    for _ in range(40):
        inst = random_instance(rng, n_max=6, zero_diagonal=False)
        path = random_walk(rng, inst.A, int(rng.integers(len(inst.states))), 6)
        beta = min_parameter_kernel(inst, path)
        assert lemmaA_check(inst, path, beta, inst.K[:, path[-1]]).ok


def test_lemmaB_gap_example1(ex1):
    vec = {"b0": b0, "b1": b1}
    mm = {"b0": 0.0, "b1": -2.0}
    xy = [tuple(map(int, s.split(","))) for s in ex1.inst.states]
    # b1 vanishes at the basepoint, so the gap for b1 is 0 - 0 + 2
    for name, want in (("b0", 0.0), ("b1", 2.0)):
        xi = np.array([vec[name](x, y) for x, y in xy])
        assert lemmaB_gap(ex1.inst, ex1.u, "0,0", xi, mm[name]) == want


def test_u_geodesics_respect_lemmaB(ex1):
    # paths along row 1 head to b1; their parameter cannot beat the gap
    xy = [tuple(map(int, s.split(","))) for s in ex1.inst.states]
    xi = np.array([b1(x, y) for x, y in xy])
    gap = lemmaB_gap(ex1.inst, ex1.u, "0,0", xi, -2.0)
    path = ["0,0"] + [label(x, 1) for x in range(12)]
    assert min_parameter_u(ex1.inst.A, ex1.u, path) >= gap - 1e-9
    assert min_parameter_u(ex1.inst.A, ex1.u, path) == gap


def test_witness_single_state():
    inst = MartinInstance(Kernel(["a"], [[0.0]]), "a")
    cert = witness_geodesic(inst, [0.0], "a", 0.5, horizon=5)
    assert cert.path == ["a"] * 6
    assert cert.beta == 0.0


def test_witness_example2():
    ex = example2(50)
    cert = witness_geodesic(ex.inst, ex.u, "inf", 0.5, horizon=50, interior=list(range(50)))
    assert min_parameter_u(ex.inst.A, ex.u, cert.path) <= 0.5 + 1e-9
    assert cert.checks["gap"] <= 0.5


def test_halving_underflows_on_example2():
    ex = example2(50)
    with pytest.raises(EmptyZ):
        witness_geodesic(ex.inst, ex.u, "inf", 0.1, horizon=100, interior=list(range(50)), shrink="half")


def test_witness_requires_harmonic():
    A = Kernel.from_entries(["a", "b"], [("a", "b", -1), ("b", "b", 0)])
    inst = MartinInstance(A, "a")
    with pytest.raises(NotHarmonic):
        witness_geodesic(inst, [0.0, 0.0], "a", 0.5)


def test_witness_strict_horizon():
    A = Kernel.from_entries(["a", "b", "c"], [("a", "a", 0), ("b", "b", 0), ("c", "c", 0), ("a", "b", -1), ("a", "c", -1)])
    inst = MartinInstance(A, "a")
    with pytest.raises(HorizonExhausted) as err:
        witness_geodesic(inst, np.zeros(3), "a", 0.5, horizon=2, require_full_round=True)
    assert isinstance(err.value.certificate, GeodesicCertificate)


def test_witness_lands_on_a_maximal_column(rng):
    for _ in range(25):
        inst = random_instance(rng)
        u, _ = column_mix(rng, inst, k_max=2)
        starts = np.flatnonzero(np.isfinite(u))
        j0 = int(rng.choice(starts))
        cert = witness_geodesic(inst, u, j0, 0.25, horizon=3 * len(inst.states))
        assert cert.beta <= 0.25 + 1e-9
        assert cert.checks["gap"] <= 0.25
        res = mu_min(inst, u)
        assert res.ops.maximal[cert.checks["target_point"]]


def test_gap_matches_mu_max(rng):
    inst = random_instance(rng)
    u, _ = column_mix(rng, inst)
    ps = build_point_set(inst)
    for k, n in enumerate(ps.names):
        j = ps.witnesses[k][0]
        mm = mu_max(inst, u, ps, n)
        assert lemmaB_gap(inst, u, inst.b, inst.K[:, j], mm) == u[inst.b] - inst.K[inst.b, j] - mm


def test_certificate_kind_validation(two_state):
    with pytest.raises(ValueError):
        GeodesicCertificate(["1"], "other", 0.0, "1")
    cert = certify_kernel(two_state, ["1", "2"])
    assert cert.kind == "kernel" and cert.reference == "1"
