import numpy as np
import pytest

from conftest import NEG, random_instance
from mpmartin import DimensionMismatch, EmptySupport, Kernel, Measure, is_harmonic, is_superharmonic, represents
from mpmartin.harmonic import residual, sup_expression


def test_residual_treats_double_neg_inf_as_zero():
    assert list(residual([NEG, 1.0], [NEG, NEG])) == [0.0, np.inf]


def test_constant_zero_on_zero_loop():
    A = Kernel(["a"], [[0.0]])
    assert is_harmonic(A, [0.0]).verdict


def test_superharmonic_but_not_harmonic():
    A = Kernel.from_entries(["a", "b"], [("a", "b", -1)])
    u = np.array([0.0, 0.0])
    assert is_superharmonic(A, u).verdict
    rep = is_harmonic(A, u)
    assert not rep.verdict
    # b has no successor at all, a loses 1 along its only edge
    assert rep.failures() == ["b", "a"]
    assert list(rep.residuals) == [1.0, np.inf]


def test_not_superharmonic_reports_worst_state():
    A = Kernel.from_entries(["a", "b"], [("a", "b", 0), ("b", "b", 0)])
    rep = is_superharmonic(A, [0.0, 2.0])
    assert not rep.verdict
    assert rep.failures() == ["a"]
    assert rep.worst() == -2.0


def test_window_restriction():
    A = Kernel.from_entries(["a", "b"], [("a", "b", -1), ("b", "b", 0)])
    rep = is_harmonic(A, [0.0, 0.0], states=[1])
    assert rep.verdict and rep.window and rep.labels == ["b"]


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        is_harmonic(Kernel(["a"], [[0.0]]), [0.0, 1.0])


def test_martin_columns_are_superharmonic(rng):
    for _ in range(30):
        inst = random_instance(rng, zero_diagonal=False)
        for j in range(len(inst.states)):
            assert is_superharmonic(inst.A, inst.K[:, j]).verdict


def test_represents_and_empty_support():
    pts = [(np.array([0.0, -1.0]), "p"), (np.array([-3.0, 0.0]), "q")]
    mu = Measure({"p": 1.0, "q": 0.5})
    assert list(sup_expression(pts, mu)) == [1.0, 0.5]
    assert represents(pts, mu, [1.0, 0.5]).verdict
    assert not represents(pts, mu, [1.0, 0.0]).verdict
    with pytest.raises(EmptySupport):
        represents(pts, Measure({"p": NEG}), [0.0, 0.0])
    assert Measure({"p": 1.0, "q": NEG}).support() == ["p"]
