import numpy as np
import pytest

from maxmin_power import ProblemInstance


def random_instance(rng, K=None, N=None, p_max=None, sparse_A=True, irreducible=False):
    """Random valid instance; A rows are kept nonzero so every user is constrained."""
    if K is None:
        # a 1x1 zero-diagonal C is reducible
        K = int(rng.integers(2 if irreducible else 1, 17))
    N = int(rng.integers(1, 9)) if N is None else N
    if sparse_A:
        A = rng.uniform(0.1, 2.0, (K, N)) * (rng.random((K, N)) < 0.6)
        empty = ~A.any(axis=1)
        A[empty, rng.integers(0, N, empty.sum())] = rng.uniform(0.1, 2.0, empty.sum())
    else:
        A = rng.uniform(0.1, 2.0, (K, N))
    b = rng.uniform(0.2, 5.0, K)
    mask = 1.0 if irreducible else rng.random((K, K)) < 0.7
    C = rng.uniform(0.0, 1.0, (K, K)) * mask
    if irreducible:
        C += 0.01
    np.fill_diagonal(C, rng.uniform(0, 0.2, K) if not irreducible else 0.0)
    sigma = rng.uniform(0.05, 2.0, K)
    if p_max is None:
        p_max = 10.0 ** rng.uniform(-2, 3)
    return ProblemInstance(A=A, b=b, C=C, sigma=sigma, p_max=p_max)


def symmetric_pair():
    return ProblemInstance(
        A=np.eye(2), b=np.ones(2), C=np.array([[0.0, 1.0], [1.0, 0.0]]), sigma=np.ones(2), p_max=1.0
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
