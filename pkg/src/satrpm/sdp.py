"""Unit-vector relaxation of MAXSAT and its coordinate-descent solver.

The +-1 variables of a formula are relaxed to unit columns v_1..v_n of a
k x (n+1) matrix V whose extra column v_T (index 0) is the truth direction.
Clause rows are relaxed to real rows carrying a -1 truth coefficient and
the signed literals, scaled by 1/sqrt(4 L_i) for a clause with L_i
literals.  Minimizing <V^T V, S'^T S'> over unit columns is the relaxation;
an assignment is recovered by rounding each v_i against v_T with
P(true) = arccos(-v_i . v_T) / pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .cnf import ClauseMatrix, DimensionError

#: Column index of the truth direction in relaxed matrices and embeddings.
TRUTH_COL = 0

UNIT_NORM_TOL = 1e-7


def min_embedding_dim(n: int) -> int:
    """Smallest k with k > sqrt(2 n); above this rank the relaxation is exact."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.isqrt(2 * n) + 1


def relax_clauses(S: ClauseMatrix) -> np.ndarray:
    """Relaxed clause matrix, shape (m, n+1): row i = (-1, s_i) / sqrt(4 L_i)."""
    L = S.literal_counts().astype(np.float64)
    out = np.concatenate(
        [-np.ones((S.m, 1)), S.entries.astype(np.float64)], axis=1)
    out /= np.sqrt(4.0 * L)[:, None]
    return out


def sdp_objective(V: np.ndarray, S_relaxed: np.ndarray) -> float:
    """Frobenius inner product <V^T V, S'^T S'> = |S' V^T|_F^2."""
    V = np.asarray(V, dtype=np.float64)
    S_relaxed = np.asarray(S_relaxed, dtype=np.float64)
    if V.shape[1] != S_relaxed.shape[1]:
        raise DimensionError(
            f"V has {V.shape[1]} columns but the relaxed matrix has {S_relaxed.shape[1]}")
    prod = S_relaxed @ V.T
    return float(np.sum(prod * prod))


def check_unit_columns(V: np.ndarray, tol: float = UNIT_NORM_TOL) -> None:
    norms = np.linalg.norm(V, axis=0)
    bad = np.abs(norms - 1.0) > tol
    if bad.any():
        raise DimensionError(
            f"columns {np.flatnonzero(bad).tolist()} are not unit vectors")


def random_unit_embedding(k: int, n_cols: int, rng: np.random.Generator) -> np.ndarray:
    """k x n_cols matrix of independent uniform samples on the unit sphere."""
    V = rng.normal(size=(k, n_cols))
    V /= np.linalg.norm(V, axis=0, keepdims=True)
    return V


def rounding_probability(V: np.ndarray, i: int) -> float:
    """P(variable i rounds to true) = arccos(-v_i . v_T) / pi."""
    if i == TRUTH_COL:
        raise ValueError("the truth column has no rounding probability")
    x = float(np.clip(-(V[:, i] @ V[:, TRUTH_COL]), -1.0, 1.0))
    return math.acos(x) / math.pi


def randomized_round(V: np.ndarray, i: int,
                     rng: np.random.Generator) -> tuple[int, float]:
    """Sample one +-1 value for variable column i; also returns P(true)."""
    p = rounding_probability(V, i)
    sample = 1 if rng.random() < p else -1
    return sample, p


def round_assignment(V: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Round every variable column at once; returns a +-1 vector of length n."""
    x = np.clip(-(V[:, 1:].T @ V[:, TRUTH_COL]), -1.0, 1.0)
    probs = np.arccos(x) / np.pi
    return np.where(rng.random(probs.shape[0]) < probs, 1, -1).astype(np.int64)


@dataclass
class MixingResult:
    V: np.ndarray                 # k x (n+1), unit columns
    objective_trace: np.ndarray   # objective before each sweep and after the last
    sweeps: int
    converged: bool
    degenerate_updates: int


def mixing_solve(S_relaxed: np.ndarray,
                 V0: np.ndarray,
                 frozen: frozenset[int] | set[int] = frozenset({TRUTH_COL}),
                 max_sweeps: int = 100,
                 tol: float = 1e-6) -> MixingResult:
    """Block coordinate descent over non-frozen unit columns.

    Each update replaces one column with the exact minimizer of the
    objective given all other columns, renormalized to the sphere; columns
    are visited in ascending index order (Gauss-Seidel) so runs are
    reproducible.  The objective trace is non-increasing; iteration stops
    when a full sweep improves it by less than ``tol``.
    """
    S_relaxed = np.ascontiguousarray(S_relaxed, dtype=np.float64)
    N = S_relaxed.shape[1]
    if V0.shape[1] != N:
        raise DimensionError(f"V0 has {V0.shape[1]} columns, expected {N}")
    frozen = set(frozen) | {TRUTH_COL}
    update_cols = np.array([i for i in range(N) if i not in frozen], dtype=np.int64)
    V = np.ascontiguousarray(V0, dtype=np.float64)[None, :, :].copy()
    executed, trace, _, _, degenerate = kernels.mix_forward(
        S_relaxed, V, update_cols, max_sweeps, tol, False)
    converged = bool(
        executed < max_sweeps
        or (trace.shape[1] >= 2 and trace[0, -2] - trace[0, -1] < tol))
    return MixingResult(V=V[0], objective_trace=trace[0], sweeps=executed,
                        converged=converged, degenerate_updates=int(degenerate[0]))


def solve_maxsat_approx(S: ClauseMatrix,
                        seed: int,
                        k: int | None = None,
                        rounding_rounds: int = 64,
                        max_sweeps: int = 100,
                        tol: float = 1e-6) -> tuple[int, np.ndarray, MixingResult]:
    """Mixing relaxation plus best-of-N randomized rounding.

    Returns (satisfied count, assignment, mixing result) for the best of
    ``rounding_rounds`` independent roundings of the solved embedding.
    """
    if k is None:
        k = min_embedding_dim(S.n) + 1
    rng = np.random.default_rng(seed)
    S_relaxed = relax_clauses(S)
    V0 = random_unit_embedding(k, S.n + 1, rng)
    result = mixing_solve(S_relaxed, V0, max_sweeps=max_sweeps, tol=tol)
    signed = S.entries
    best_count = -1
    best_p = None
    for _ in range(rounding_rounds):
        p = round_assignment(result.V, rng)
        count = int((signed * p > 0).any(axis=1).sum())
        if count > best_count:
            best_count, best_p = count, p
    return best_count, best_p, result
