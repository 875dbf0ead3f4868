import numpy as np
import pytest

from conftest import NEG, random_instance
from mpmartin import (
    BoundaryFamily,
    InaccessibleState,
    Kernel,
    MartinInstance,
    NonConvergent,
    build_point_set,
    example2,
    finite_martin_space,
    h_flat,
    martin_kernel,
    minimal_martin_space,
    tail_limit,
)
from mpmartin.kernels import tail_vector


def test_tail_limit_cases():
    assert tail_limit([5.0, 1.0, 1.0, 1.0]) == 1.0
    assert tail_limit([3.0]) == 3.0
    assert tail_limit([0.0, -1.0, -2.0, -3.0]) == NEG
    assert tail_limit([0.0, NEG, NEG]) == NEG
    with pytest.raises(NonConvergent):
        tail_limit([0.0, 1.0, 0.0, 1.0])
    with pytest.raises(NonConvergent):
        tail_limit([])
    # shrinking steps do not count as divergence
    with pytest.raises(NonConvergent):
        tail_limit([0.0, -1.0, -1.5, -1.75])


def test_tail_vector():
    rows = [[0, 1], [2, 3], [2, 3], [2, 3]]
    assert list(tail_vector(rows)) == [2, 3]
    with pytest.raises(NonConvergent):
        tail_vector([[0.0], [1.0], [2.0]])


def test_two_state_martin_kernel(two_state):
    # A* = [[0, -1], [-2, 0]], basepoint "1"
    assert np.array_equal(martin_kernel(two_state).weights, [[0.0, 0.0], [-2.0, 1.0]])


def test_basepoint_row_is_zero(rng):
    for _ in range(20):
        inst = random_instance(rng)
        assert np.all(inst.K[inst.b] == 0.0)


def test_inaccessible_state():
    A = Kernel.from_entries(["a", "b"], [("b", "a", -1)])
    with pytest.raises(InaccessibleState) as err:
        MartinInstance(A, "a")
    assert err.value.state == "b"


def test_unknown_basepoint():
    with pytest.raises(KeyError):
        MartinInstance(Kernel(["a"], [[0.0]]), "z")


def test_finite_martin_space_merges_equal_columns():
    # b and c are interchangeable, so their columns coincide
    A = Kernel.from_entries(
        ["a", "b", "c"], [("a", "b", -1), ("a", "c", -1), ("b", "c", 0), ("c", "b", 0)]
    )
    inst = MartinInstance(A, "a")
    pts = finite_martin_space(inst)
    assert [p.name for p in pts] == ["K[a]", "K[b]"]
    assert pts[1].witnesses == ["b", "c"]


def test_point_set_without_family_is_all_columns(rng):
    inst = random_instance(rng)
    ps = build_point_set(inst)
    assert ps.window == list(range(len(inst.states)))
    for k, n in enumerate(ps.names):
        j = ps.witnesses[k][0]
        assert np.array_equal(ps.vectors[k], inst.K[:, j])


def test_family_point_absorbs_matching_column():
    ex = example2(10)
    ps = build_point_set(ex.inst, ex.family)
    assert len(ps) == 11
    k = ps.pos["K[inf]"]
    assert ps.witnesses[k] == [ex.inst.index["inf"]]


def test_family_validation_flags_a_bad_point():
    ex = example2(10)
    fam = ex.family
    bad = BoundaryFamily(
        fam.window,
        {**fam.points, "K[3]": fam.points["K[3]"] + 0.5},
        fam.rep_sequences,
        fam.accumulation,
        fam.tol,
        fam.core,
        fam.column_states,
    )
    assert ex.family.validate(ex.inst) == []
    problems = bad.validate(ex.inst)
    assert any("K[3]" in p for p in problems)


def test_family_must_fit_window():
    with pytest.raises(ValueError):
        BoundaryFamily(["a", "b"], {"p": [0.0]})


def test_h_flat_on_finite_columns(rng):
    # for a column point, h_flat(w, w) is the best loop weight through its witness
    for _ in range(20):
        inst = random_instance(rng, zero_diagonal=False)
        ps = build_point_set(inst)
        for k, n in enumerate(ps.names):
            j = ps.witnesses[k]
            want = min(inst.Aplus.weights[i, jj] for i in j for jj in j) if len(j) == 1 else None
            if want is not None:
                assert h_flat(inst, ps, n, n) == want


def test_example2_point_at_infinity_is_not_minimal():
    ex = example2(30)
    ps = build_point_set(ex.inst, ex.family)
    assert h_flat(ex.inst, ps, "K[inf]", "K[inf]") == pytest.approx(-2.0)
    minimal = minimal_martin_space(ex.inst, ps)
    assert "K[inf]" not in minimal
    assert len(minimal) == 30


def test_zero_diagonal_makes_every_column_minimal(rng):
    for _ in range(20):
        inst = random_instance(rng)
        ps = build_point_set(inst)
        assert minimal_martin_space(inst, ps) == ps.names
