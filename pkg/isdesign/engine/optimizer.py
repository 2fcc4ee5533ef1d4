"""
Optimizers for the auxiliary-set assignment Z_A.

Two binary programs over Z_A in {0,1}^{n_A}:

* direct:   minimize ||Gamma Z_A - rho 1||_1          (exposures as close to rho as possible)
* variance: maximize Z_A^T Gamma^T [I - 11^T/n_I] Gamma Z_A
            = n_I * Var_n[rho_I]                      (spread the exposures out)

Small instances (n_A <= exact_threshold) are enumerated exhaustively.
Larger ones use multi-restart steepest single-bit-flip local search. The
score change of every candidate flip is evaluated at once from the sparse
(row, col) entries of Gamma; after a flip only the exposures of the rows in
that column are updated (integer neighbor counts, so no drift).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..structures.assignment import Assignment, OptimizationResult, OptimizerOptions, Scope
from ..structures.partition import InterferenceMatrix
from ..utils.errors import ParameterError
from ..utils.logger import get_logger
from ..utils.rng import stream
from .independent_set import exposure

IMPROVEMENT_TOL = 1e-10
ENUMERATION_CHUNK = 1 << 15


def direct_objective(gamma: InterferenceMatrix, z_a, rho_target: float) -> float:
    """||Gamma Z_A - rho 1||_1 computed from scratch."""
    return float(np.abs(exposure(gamma, z_a) - rho_target).sum())


def variance_objective(gamma: InterferenceMatrix, z_a) -> float:
    """n_I * Var_n[Gamma Z_A] (population variance) computed from scratch."""
    rho = exposure(gamma, z_a)
    if rho.size == 0:
        return 0.0
    return float(np.sum((rho - rho.mean()) ** 2))


@dataclass
class _FlipState:
    """Bieżący stan przeszukiwania dla jednego restartu."""

    z: np.ndarray
    counts: np.ndarray
    rho: np.ndarray


class _FlipSearch:
    """Shared bookkeeping for both objectives."""

    def __init__(self, gamma: InterferenceMatrix):
        self.gamma = gamma
        coo = gamma.counts.tocoo()
        self.rows = coo.row.astype(np.int64)
        self.cols = coo.col.astype(np.int64)
        self.safe_degrees = np.where(gamma.degrees > 0, gamma.degrees, 1).astype(float)
        self.weights = 1.0 / self.safe_degrees[self.rows]
        csc = gamma.counts.tocsc()
        self.col_ptr = csc.indptr
        self.col_rows = csc.indices
        self.col_sums = np.bincount(self.cols, weights=self.weights, minlength=gamma.cols)

    def start(self, z: np.ndarray) -> _FlipState:
        counts = np.asarray(self.gamma.counts @ z, dtype=np.int64)
        return _FlipState(z.copy(), counts, counts / self.safe_degrees)

    def flip(self, state: _FlipState, j: int) -> None:
        sign = 1 - 2 * int(state.z[j])
        state.z[j] = 1 - state.z[j]
        rows = self.col_rows[self.col_ptr[j] : self.col_ptr[j + 1]]
        state.counts[rows] += sign
        state.rho[rows] = state.counts[rows] / self.safe_degrees[rows]

    def signs(self, state: _FlipState) -> np.ndarray:
        return 1.0 - 2.0 * state.z

    def direct_deltas(self, state: _FlipState, rho_target: float) -> np.ndarray:
        residual = state.rho[self.rows] - rho_target
        moved = residual + self.signs(state)[self.cols] * self.weights
        change = np.abs(moved) - np.abs(residual)
        return np.bincount(self.cols, weights=change, minlength=self.gamma.cols)

    def variance_deltas(self, state: _FlipState) -> np.ndarray:
        n_rows = self.gamma.rows
        signs = self.signs(state)
        entry_change = 2.0 * signs[self.cols] * self.weights * state.rho[self.rows] + self.weights**2
        square_change = np.bincount(self.cols, weights=entry_change, minlength=self.gamma.cols)
        total = state.rho.sum()
        shifted = total + signs * self.col_sums
        return square_change - (shifted**2 - total**2) / n_rows


def _initial_points(n_aux: int, opts: OptimizerOptions, constant_third: Optional[int]) -> List[np.ndarray]:
    points: List[np.ndarray] = []
    for index in range(opts.restarts):
        if index == 0:
            points.append(np.zeros(n_aux, dtype=np.int64))
        elif index == 1:
            points.append(np.ones(n_aux, dtype=np.int64))
        elif index == 2 and constant_third is not None:
            points.append(np.full(n_aux, constant_third, dtype=np.int64))
        else:
            rng = stream(opts.seed, "restart", index)
            points.append(rng.integers(0, 2, size=n_aux, dtype=np.int64))
    return points


def _local_search(
    search: _FlipSearch,
    starts: List[np.ndarray],
    deltas: Callable[[_FlipState], np.ndarray],
    start_objective: Callable[[np.ndarray], float],
    maximize: bool,
    iteration_limit: int,
) -> Tuple[np.ndarray, int, List[List[float]]]:
    best_z: Optional[np.ndarray] = None
    best_value = 0.0
    total_flips = 0
    traces: List[List[float]] = []

    for z0 in starts:
        state = search.start(z0)
        value = start_objective(state.z)
        trace = [value]
        for _ in range(iteration_limit):
            change = deltas(state)
            if change.size == 0:
                break
            # np.argmax/argmin zwracają najniższy indeks przy remisie
            j = int(np.argmax(change)) if maximize else int(np.argmin(change))
            gain = change[j] if maximize else -change[j]
            if gain <= IMPROVEMENT_TOL:
                break
            search.flip(state, j)
            value += float(change[j])
            trace.append(value)
            total_flips += 1
        traces.append(trace)

        final = start_objective(state.z)
        better = final > best_value + IMPROVEMENT_TOL if maximize else final < best_value - IMPROVEMENT_TOL
        if best_z is None or better:
            best_z, best_value = state.z.copy(), final

    assert best_z is not None
    return best_z, total_flips, traces


def _enumerate(gamma: InterferenceMatrix, score: Callable[[np.ndarray], np.ndarray], maximize: bool) -> np.ndarray:
    """Exhaustive search over all 2^{n_A} assignments; lowest code wins ties."""
    n_aux = gamma.cols
    dense = gamma.counts.toarray()
    safe_degrees = np.where(gamma.degrees > 0, gamma.degrees, 1).astype(float)
    shifts = np.arange(n_aux, dtype=np.int64)
    best_code, best_value = 0, None

    for start in range(0, 1 << n_aux, ENUMERATION_CHUNK):
        codes = np.arange(start, min(start + ENUMERATION_CHUNK, 1 << n_aux), dtype=np.int64)
        bits = (codes[:, None] >> shifts) & 1
        rho = (bits @ dense.T) / safe_degrees
        values = score(rho)
        k = int(np.argmax(values)) if maximize else int(np.argmin(values))
        value = float(values[k])
        if (
            best_value is None
            or (maximize and value > best_value + IMPROVEMENT_TOL)
            or (not maximize and value < best_value - IMPROVEMENT_TOL)
        ):
            best_code, best_value = int(codes[k]), value

    return (best_code >> shifts) & 1


def _finish(
    name: str,
    gamma: InterferenceMatrix,
    z: np.ndarray,
    objective: float,
    exact: bool,
    restarts: int,
    flips: int,
    traces: List[List[float]],
) -> OptimizationResult:
    get_logger().log_optimizer(name, objective, restarts, flips, exact)
    return OptimizationResult(
        assignment=Assignment.from_array(Scope.AUXILIARY, z, expected_length=gamma.cols),
        objective=objective,
        exact=exact,
        restarts=restarts,
        flips=flips,
        traces=traces,
    )


def optimize_direct(
    gamma: InterferenceMatrix, rho_target: float, opts: Optional[OptimizerOptions] = None
) -> OptimizationResult:
    """
    Minimize ||Gamma Z_A - rho 1||_1.

    Args:
        gamma: Interference matrix between V_I and V_A
        rho_target: Target exposure in [0, 1]
        opts: Search options (restarts, iteration limit, seed, enumeration threshold)

    Returns:
        Best assignment found and its objective, recomputed from scratch
    """
    opts = opts or OptimizerOptions()
    opts.validate()
    if not 0.0 <= rho_target <= 1.0:
        raise ParameterError(f"rho_target={rho_target} must lie in [0, 1]")
    if gamma.rows == 0:
        return _finish("direct", gamma, np.zeros(gamma.cols, dtype=np.int64), 0.0, True, 0, 0, [])

    if gamma.cols <= opts.exact_threshold:
        z = _enumerate(gamma, lambda rho: np.abs(rho - rho_target).sum(axis=1), maximize=False)
        return _finish("direct", gamma, z, direct_objective(gamma, z, rho_target), True, 0, 0, [])

    search = _FlipSearch(gamma)
    starts = _initial_points(gamma.cols, opts, int(np.floor(rho_target + 0.5)))
    z, flips, traces = _local_search(
        search,
        starts,
        lambda state: search.direct_deltas(state, rho_target),
        lambda bits: direct_objective(gamma, bits, rho_target),
        maximize=False,
        iteration_limit=opts.iteration_limit(gamma.cols),
    )
    return _finish("direct", gamma, z, direct_objective(gamma, z, rho_target), False, len(starts), flips, traces)


def optimize_variance(gamma: InterferenceMatrix, opts: Optional[OptimizerOptions] = None) -> OptimizationResult:
    """
    Maximize n_I * Var_n[Gamma Z_A].

    The objective is a convex quadratic, so its maximum over the cube sits at a
    vertex and a vertex search is enough. It never exceeds n_I / 4.
    """
    opts = opts or OptimizerOptions()
    opts.validate()
    if gamma.rows == 0:
        return _finish("variance", gamma, np.zeros(gamma.cols, dtype=np.int64), 0.0, True, 0, 0, [])

    if gamma.cols <= opts.exact_threshold:
        z = _enumerate(gamma, lambda rho: ((rho - rho.mean(axis=1, keepdims=True)) ** 2).sum(axis=1), maximize=True)
        return _finish("variance", gamma, z, variance_objective(gamma, z), True, 0, 0, [])

    search = _FlipSearch(gamma)
    starts = _initial_points(gamma.cols, opts, None)
    z, flips, traces = _local_search(
        search,
        starts,
        search.variance_deltas,
        lambda bits: variance_objective(gamma, bits),
        maximize=True,
        iteration_limit=opts.iteration_limit(gamma.cols),
    )
    return _finish("variance", gamma, z, variance_objective(gamma, z), False, len(starts), flips, traces)
