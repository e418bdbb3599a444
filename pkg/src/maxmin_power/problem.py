"""
Affine max-min power control problems.

A problem instance is the tuple ``(A, b, C, sigma, p_max)`` describing

    maximize    min_k  b_k p_k / (c_k^T p + sigma_k)
    subject to  a_n^T p <= p_max   for every column a_n of A,
                p >= 0,

where ``c_k`` is the k-th column of ``C``. All quantities are in linear
scale. Users are indexed along the rows of ``A`` and ``C``.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidInstanceError",
    "ProblemInstance",
    "ScaledProblem",
    "validate",
    "scale",
    "norm_star",
    "candidate_matrix",
    "evaluate_utility",
    "sinr_ratios",
    "is_feasible",
]


class InvalidInstanceError(ValueError):
    """Raised when an instance violates the assumptions of the solver."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _frozen(x, ndim):
    arr = np.array(x, dtype=float, ndmin=ndim)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """
    Parameters
    ----------
    A : (K, N) array
        Constraint coefficients, one constraint per column.
    b : (K,) array
        Signal gains.
    C : (K, K) array
        Interference coefficients; column k weighs the powers seen by user k.
    sigma : (K,) array
        Noise powers.
    p_max : float
        Power budget shared by all constraints.
    """

    A: np.ndarray
    b: np.ndarray
    C: np.ndarray
    sigma: np.ndarray
    p_max: float

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A, 2))
        object.__setattr__(self, "b", _frozen(self.b, 1))
        object.__setattr__(self, "C", _frozen(self.C, 2))
        object.__setattr__(self, "sigma", _frozen(self.sigma, 1))
        object.__setattr__(self, "p_max", float(self.p_max))

    @property
    def K(self):
        return self.b.shape[0]

    @property
    def N(self):
        return self.A.shape[1]

    def with_p_max(self, p_max):
        return ProblemInstance(self.A, self.b, self.C, self.sigma, p_max)


@dataclass(frozen=True, eq=False)
class ScaledProblem:
    """Scaled form: ``M = diag(b)^-1 C^T`` and ``u = diag(b)^-1 sigma``."""

    M: np.ndarray
    u: np.ndarray
    A: np.ndarray
    p_max: float
    instance: ProblemInstance = field(default=None, repr=False)

    @property
    def K(self):
        return self.u.shape[0]

    @property
    def N(self):
        return self.A.shape[1]

    def with_p_max(self, p_max):
        inst = None if self.instance is None else self.instance.with_p_max(p_max)
        return ScaledProblem(self.M, self.u, self.A, float(p_max), inst)

    def mapping(self, p):
        """Affine interference mapping ``T(p) = M p + u``."""
        return self.M @ p + self.u


def validate(inst):
    """
    Collect every violated assumption of ``inst``.

    Messages use 1-based user/constraint indices. An empty list means the
    instance is valid.
    """
    out = []
    A, b, C, sigma = inst.A, inst.b, inst.C, inst.sigma
    K = b.shape[0]
    if A.ndim != 2 or A.shape[0] != K:
        out.append(f"A has shape {A.shape}, expected ({K}, N)")
    if C.shape != (K, K):
        out.append(f"C has shape {C.shape}, expected ({K}, {K})")
    if sigma.shape != (K,):
        out.append(f"sigma has shape {sigma.shape}, expected ({K},)")
    if out:
        return out

    for name, arr in (("A", A), ("C", C)):
        bad = ~np.isfinite(arr)
        for i, j in zip(*np.nonzero(bad)):
            out.append(f"{name}[{i + 1},{j + 1}] not finite")
        neg = np.isfinite(arr) & (arr < 0)
        for i, j in zip(*np.nonzero(neg)):
            out.append(f"{name}[{i + 1},{j + 1}] negative")
    for name, arr in (("b", b), ("sigma", sigma)):
        for k in np.nonzero(~(np.isfinite(arr) & (arr > 0)))[0]:
            out.append(f"{name}[{k + 1}] not strictly positive")
    if not (np.isfinite(inst.p_max) and inst.p_max > 0):
        out.append("p_max not strictly positive")

    # bounded feasible set: every user appears in some constraint
    for k in np.nonzero(~np.any(A > 0, axis=1))[0]:
        out.append(f"user {k + 1} unconstrained: feasible set unbounded")
    return out


def scale(inst):
    violations = validate(inst)
    if violations:
        raise InvalidInstanceError(violations)
    M = inst.C.T / inst.b[:, None]
    u = inst.sigma / inst.b
    return ScaledProblem(M, u, inst.A, inst.p_max, inst)


def norm_star(p, A, p_max):
    """Monotone norm ``max_n a_n^T |p| / p_max`` whose unit ball is the feasible set."""
    p = np.abs(np.asarray(p, dtype=float))
    A = np.asarray(A, dtype=float)
    return float(np.max(A.T @ p)) / p_max


def candidate_matrix(sp, n):
    """``M + u a_n^T / p_max`` for the n-th (0-based) constraint."""
    if not 0 <= n < sp.N:
        raise IndexError(f"constraint index {n} out of range for N={sp.N}")
    return sp.M + np.outer(sp.u, sp.A[:, n]) / sp.p_max


def sinr_ratios(inst, p):
    p = np.asarray(p, dtype=float)
    return inst.b * p / (inst.C.T @ p + inst.sigma)


def evaluate_utility(inst, p):
    p = np.asarray(p, dtype=float)
    if np.any(p == 0):
        return 0.0
    return float(np.min(sinr_ratios(inst, p)))


def is_feasible(inst, p, tol=1e-9):
    p = np.asarray(p, dtype=float)
    if np.any(p < -tol):
        return False
    return norm_star(p, inst.A, inst.p_max) <= 1 + tol
