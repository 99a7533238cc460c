"""Rank-1 maxvol pivot search and the residual of the resulting cross.

The search alternates argmax scans: take the max-modulus element of a
column, then of that element's row, and so on, until the current element is
maximal in both its row and its column.  Each scan that lands on a pivot
(including the initial column scan) counts as one alternation; ties always
resolve to the smallest index, so results are fully deterministic.

Three variants are provided:

* :func:`maxvol_rank1` -- run until bidirectionally maximal (or a step cap);
* :func:`maxvol_fixed_steps` -- stop after a fixed number of alternations,
  returning the last pivot whether or not it is maximal;
* :func:`maxvol_max_among_viewed` -- guarantee at least ``k`` alternations by
  restarting converged searches from the largest not-yet-pivoted element
  seen so far, then return the largest element viewed at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import quality_thresholds
from .model import RankOneModel, cnorm

__all__ = [
    "Pivot",
    "PivotTrace",
    "QualityLabels",
    "cross_residual",
    "label_quality",
    "maxvol_fixed_steps",
    "maxvol_max_among_viewed",
    "maxvol_rank1",
    "pivot_at",
    "scan_start_column",
]


@dataclass(frozen=True)
class Pivot:
    """A matrix element: position, value and value magnitude."""

    row: int
    col: int
    value: float | complex
    abs_value: float

    def __post_init__(self) -> None:
        if self.abs_value != abs(self.value):
            raise ValueError("abs_value must equal |value|")


def pivot_at(A, row: int, col: int) -> Pivot:
    """The :class:`Pivot` at an explicit position of ``A``."""
    value = np.asarray(A)[row, col].item()
    return Pivot(int(row), int(col), value, abs(value))


@dataclass(frozen=True)
class PivotTrace:
    """Full record of one pivot search.

    ``visited`` lists every pivot in order.  ``steps`` counts alternations
    (argmax scans that produced a pivot, restarts included); for the
    max-among-viewed variant the final selected element is appended to
    ``visited`` without counting as a step when it differs from the last
    pivot.  ``converged`` means the final pivot is maximal in modulus over
    its entire row and entire column.  ``elements_examined`` totals the
    entries read by the scans (m per column scan, n per row scan).
    ``degenerate`` flags a zero-valued final pivot, which admits no cross.
    ``restarts`` holds the indices into ``visited`` where a restart landed.
    """

    visited: tuple[Pivot, ...]
    steps: int
    converged: bool
    start_policy: str
    elements_examined: int
    degenerate: bool = False
    restarts: tuple[int, ...] = ()

    @property
    def final(self) -> Pivot:
        return self.visited[-1]


@dataclass(frozen=True)
class QualityLabels:
    """Good/bad classification of a trace against its generating model.

    ``mu_u`` and ``mu_v`` are the relative coordinate magnitudes
    ``|u_i| / ||u||_inf`` and ``|v_j| / ||v||_inf`` at the final pivot; the
    flags use the strict comparison against ``mu_lo`` for both rows and
    columns.
    """

    mu_u: float
    mu_v: float
    start_col_good: bool
    final_col_good: bool
    final_row_good: bool


def _check_matrix(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.size == 0:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {A.shape}")
    return A


def _check_start_col(A, start_col: int) -> None:
    if not 0 <= start_col < A.shape[1]:
        raise IndexError(f"start column {start_col} out of range for {A.shape[1]} columns")


def _is_bidir_max(absA, i: int, j: int) -> bool:
    return bool(absA[i, j] >= absA[i, :].max() and absA[i, j] >= absA[:, j].max())


def _climb(absA, start_col: int, max_steps: int):
    """Alternating argmax climb; returns (positions, elements_examined).

    Every move is to a strictly larger magnitude, so the climb stops on its
    own at a bidirectionally maximal element; ``max_steps`` only caps runaway
    requests, never normal convergence.
    """
    m, n = absA.shape
    i = int(absA[:, start_col].argmax())
    j = start_col
    positions = [(i, j)]
    elements = m
    scan_row = True
    while len(positions) < max_steps:
        if scan_row:
            cand = int(absA[i, :].argmax())
            elements += n
            if not absA[i, cand] > absA[i, j]:
                break
            j = cand
        else:
            cand = int(absA[:, j].argmax())
            elements += m
            if not absA[cand, j] > absA[i, j]:
                break
            i = cand
        positions.append((i, j))
        scan_row = not scan_row
    return positions, elements


def _finish_trace(A, absA, positions):
    pivots = tuple(pivot_at(A, i, j) for i, j in positions)
    degenerate = pivots[-1].abs_value == 0.0
    converged = not degenerate and _is_bidir_max(absA, *positions[-1])
    return pivots, degenerate, converged


def maxvol_rank1(A, start_col: int, max_steps: int | None = None, *, start_policy: str = "given-column") -> PivotTrace:
    """Alternating argmax search from the argmax of ``start_col`` until the
    pivot is maximal in both its row and its column.

    ``max_steps`` (default ``m + n``, which strict ascent can never exceed)
    is a guard, not a tuning knob.  A zero-valued final pivot (reachable only
    through an all-zero start column whose argmax row is also all zero) is
    returned with ``converged=False`` and the degenerate flag set.
    """
    A = _check_matrix(A)
    _check_start_col(A, start_col)
    m, n = A.shape
    if max_steps is None:
        max_steps = m + n
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    absA = np.abs(A)
    positions, elements = _climb(absA, start_col, max_steps)
    pivots, degenerate, converged = _finish_trace(A, absA, positions)
    return PivotTrace(pivots, len(pivots), converged, start_policy, elements, degenerate)


def maxvol_fixed_steps(A, start_col: int, steps: int, *, start_policy: str = "given-column") -> PivotTrace:
    """Run exactly ``min(steps, steps to convergence)`` alternations and
    return the last pivot whether or not it is bidirectionally maximal."""
    A = _check_matrix(A)
    _check_start_col(A, start_col)
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    absA = np.abs(A)
    positions, elements = _climb(absA, start_col, steps)
    pivots, degenerate, converged = _finish_trace(A, absA, positions)
    return PivotTrace(pivots, len(pivots), converged, start_policy, elements, degenerate)


def scan_start_column(A, k: int) -> int:
    """Column index of the max-modulus element among the first ``k`` columns
    (smallest index on ties).

    The column set is literally ``0..k-1``; callers wanting ``k`` random
    columns pass a column-permuted view and map the result back.
    """
    A = _check_matrix(A)
    if not 1 <= k <= A.shape[1]:
        raise ValueError(f"k must lie in [1, {A.shape[1]}], got {k}")
    column_maxima = np.abs(A[:, :k]).max(axis=0)
    return int(column_maxima.argmax())


def maxvol_max_among_viewed(A, start_col: int, k: int, *, start_policy: str = "given-column") -> PivotTrace:
    """Alternating search forced to make at least ``k`` alternations, then
    return the largest-modulus element among all entries viewed by any scan.

    Whenever the climb converges before ``k`` alternations, it restarts from
    the largest viewed element not yet used as a pivot (smallest index on
    ties); the restart counts as an alternation and the subsequent scan
    resumes with that element's row.  The final max-among-viewed selection is
    appended to the trace when it differs from the last pivot.
    """
    A = _check_matrix(A)
    _check_start_col(A, start_col)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    absA = np.abs(A)
    m, n = A.shape
    viewed: dict[tuple[int, int], float] = {}
    used: set[tuple[int, int]] = set()
    elements = 0

    def view_column(j: int) -> int:
        nonlocal elements
        col = absA[:, j]
        for r in range(m):
            viewed[(r, j)] = float(col[r])
        elements += m
        return int(col.argmax())

    def view_row(i: int) -> int:
        nonlocal elements
        row = absA[i, :]
        for c in range(n):
            viewed[(i, c)] = float(row[c])
        elements += n
        return int(row.argmax())

    i = view_column(start_col)
    j = start_col
    positions = [(i, j)]
    used.add((i, j))
    restarts: list[int] = []
    scan_row = True
    while True:
        if scan_row:
            cand = view_row(i)
            moved = absA[i, cand] > absA[i, j]
            if moved:
                j = cand
        else:
            cand = view_column(j)
            moved = absA[cand, j] > absA[i, j]
            if moved:
                i = cand
        if moved:
            positions.append((i, j))
            used.add((i, j))
            scan_row = not scan_row
            continue
        if len(positions) >= k:
            break
        unused = [(val, -r, -c) for (r, c), val in viewed.items() if (r, c) not in used]
        if not unused:
            break
        _, neg_r, neg_c = max(unused)
        i, j = -neg_r, -neg_c
        restarts.append(len(positions))
        positions.append((i, j))
        used.add((i, j))
        scan_row = True

    steps = len(positions)
    best_val, neg_r, neg_c = max((val, -r, -c) for (r, c), val in viewed.items())
    best = (-neg_r, -neg_c)
    if best != positions[-1]:
        positions.append(best)
    pivots, degenerate, converged = _finish_trace(A, absA, positions)
    return PivotTrace(pivots, steps, converged, start_policy, elements, degenerate, tuple(restarts))


def cross_residual(A, pivot: Pivot):
    """Residual ``R = A - (column) (row) / value`` of the rank-1 cross built
    from ``pivot``, together with its Chebyshev norm.

    The cross interpolates its own row and column identically, so those
    entries of ``R`` are set to their algebraic value of exactly zero rather
    than left to rounding.  A zero pivot admits no cross and raises
    ``ZeroDivisionError``.
    """
    A = _check_matrix(A)
    if pivot.value == 0:
        raise ZeroDivisionError(f"degenerate pivot at ({pivot.row}, {pivot.col}): zero value admits no cross")
    i, j = pivot.row, pivot.col
    R = A - np.outer(A[:, j] / A[i, j], A[i, :])
    R[i, :] = 0.0
    R[:, j] = 0.0
    return R, cnorm(R)


def label_quality(model: RankOneModel, trace: PivotTrace) -> QualityLabels:
    """Classify a trace's start column and final row/column against the
    model's quality thresholds (defined only for ``epsilon <= 1/8``)."""
    mu_lo, _ = quality_thresholds(model.epsilon)
    u_abs = np.abs(model.u)
    v_abs = np.abs(model.v)
    u_inf = float(u_abs.max())
    v_inf = float(v_abs.max())
    final = trace.final
    start_col = trace.visited[0].col
    mu_u = float(u_abs[final.row]) / u_inf
    mu_v = float(v_abs[final.col]) / v_inf
    return QualityLabels(
        mu_u=mu_u,
        mu_v=mu_v,
        start_col_good=bool(v_abs[start_col] > mu_lo * v_inf),
        final_col_good=mu_v > mu_lo,
        final_row_good=mu_u > mu_lo,
    )
