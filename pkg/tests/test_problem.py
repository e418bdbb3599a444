import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxmin_power import (
    InvalidInstanceError,
    ProblemInstance,
    candidate_matrix,
    evaluate_utility,
    is_feasible,
    norm_star,
    scale,
    sinr_ratios,
    validate,
)

from conftest import random_instance


def test_scaling_matches_definition():
    inst = ProblemInstance(
        A=np.eye(2), b=np.array([2.0, 4.0]), C=np.array([[0.0, 1.0], [3.0, 0.0]]),
        sigma=np.array([1.0, 2.0]), p_max=5.0,
    )
    sp = scale(inst)
    np.testing.assert_allclose(sp.M, [[0.0, 1.5], [0.25, 0.0]])
    np.testing.assert_allclose(sp.u, [0.5, 0.5])
    # T(p) = p / sinr
    p = np.array([1.0, 2.0])
    np.testing.assert_allclose(sp.mapping(p), p / sinr_ratios(inst, p))


def test_unconstrained_user_is_reported_one_based():
    A = np.array([[1.0], [0.0]])
    inst = ProblemInstance(A=A, b=np.ones(2), C=np.zeros((2, 2)), sigma=np.ones(2), p_max=1.0)
    assert "user 2 unconstrained: feasible set unbounded" in validate(inst)
    with pytest.raises(InvalidInstanceError) as err:
        scale(inst)
    assert err.value.violations == validate(inst)


@pytest.mark.parametrize(
    "field, value, message",
    [
        ("sigma", [1.0, 0.0], "sigma[2] not strictly positive"),
        ("b", [-1.0, 1.0], "b[1] not strictly positive"),
        ("C", [[0.0, -1.0], [0.0, 0.0]], "C[1,2] negative"),
        ("A", [[1.0, np.nan], [1.0, 1.0]], "A[1,2] not finite"),
        ("p_max", 0.0, "p_max not strictly positive"),
    ],
)
def test_violations(field, value, message):
    base = dict(A=np.ones((2, 2)), b=np.ones(2), C=np.zeros((2, 2)), sigma=np.ones(2), p_max=1.0)
    base[field] = value
    assert message in validate(ProblemInstance(**base))


def test_shape_mismatch():
    inst = ProblemInstance(A=np.ones((3, 1)), b=np.ones(2), C=np.zeros((2, 2)), sigma=np.ones(2), p_max=1)
    assert any("A has shape" in v for v in validate(inst))


def test_instance_arrays_are_read_only():
    inst = random_instance(np.random.default_rng(0))
    with pytest.raises(ValueError):
        inst.C[0, 0] = 1.0


def test_candidate_matrix_index():
    sp = scale(random_instance(np.random.default_rng(1), K=3, N=2))
    np.testing.assert_allclose(candidate_matrix(sp, 1), sp.M + np.outer(sp.u, sp.A[:, 1]) / sp.p_max)
    with pytest.raises(IndexError):
        candidate_matrix(sp, 2)


def test_zero_power_gives_zero_utility():
    inst = random_instance(np.random.default_rng(2), K=3)
    assert evaluate_utility(inst, np.array([1.0, 0.0, 1.0])) == 0.0


pos = st.lists(st.floats(0.0, 10.0), min_size=3, max_size=3).map(np.array)


@settings(max_examples=60, deadline=None)
@given(p=pos, q=pos, c=st.floats(0.0, 5.0))
def test_norm_star_is_a_monotone_norm(p, q, c):
    A = np.array([[1.0, 0.5], [0.0, 2.0], [1.0, 1.0]])
    n = lambda x: norm_star(x, A, 3.0)
    assert n(p + q) <= n(p) + n(q) + 1e-12
    assert np.isclose(n(c * p), c * n(p))
    # monotone on the nonnegative orthant
    assert n(p) <= n(p + q) + 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_feasibility_is_unit_ball(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng)
    p = rng.uniform(0, 1, inst.K)
    p /= norm_star(p, inst.A, inst.p_max)
    assert is_feasible(inst, p)
    assert not is_feasible(inst, 1.01 * p)
