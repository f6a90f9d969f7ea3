"""Optimal detection-to-track assignment over an IoU cost matrix."""

from public import public
from scipy.optimize import linear_sum_assignment
from swimtrack.codetools import SwimtrackError, debug
from swimtrack.core import iou_matrix
import collections
import numpy as np
import textwrap

# cost of a padded row/column; larger than any 1 - IoU cost
SENTINEL_COST = 1e6

DEFAULT_IOU_MIN = 0.3


@public
class InvalidMatrixError(SwimtrackError):
    exit_code = 3


AssignmentResult = collections.namedtuple(
    'AssignmentResult',
    ['matches', 'unmatched_tracks', 'unmatched_detections'])
AssignmentResult.__doc__ = """\
`matches` is a list of `(track_index, detection_index)` pairs; the other two
fields list the indices left without a partner."""
public(AssignmentResult)


def _total(cost):
    if cost.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].sum()


def _lexicographic(cost, tol):
    """Among all minimum-cost assignments of the square matrix `cost`, pick
    the one whose column sequence (row 0 first) is lexicographically
    smallest."""
    n = cost.shape[0]
    free_cols = list(range(n))
    chosen = []
    for row in range(n):
        sub = cost[row:][:, free_cols]
        rows, cols = linear_sum_assignment(sub)
        best = sub[rows, cols].sum()
        # rows come back sorted, so cols[0] belongs to `row`
        pick = free_cols[cols[0]]

        for col in free_cols:
            if col >= pick:
                break
            rest_cols = [c for c in free_cols if c != col]
            rest = cost[row + 1:][:, rest_cols]
            # row minima bound the rest from below
            bound = rest.min(axis=1).sum() if rest.size else 0.0
            if cost[row, col] + bound > best + tol:
                continue
            if cost[row, col] + _total(rest) <= best + tol:
                pick = col
                break

        chosen.append(pick)
        free_cols.remove(pick)
    return chosen


@public
def hungarian(cost):
    """Minimum total cost one-to-one assignment.

    Rectangular matrices are padded to square with `SENTINEL_COST` and the
    padded pairs are dropped, so `min(n_rows, n_cols)` pairs come back. When
    several assignments share the minimum cost the lexicographically
    smallest `(row, col)` sequence wins.

    Parameters
    ----------
    cost: array-like
        `n_rows x n_cols` matrix of finite costs.

    Returns
    -------
    pairs: list of (row, col)
        Sorted by row.

    Raises
    ------
    InvalidMatrixError
        If the matrix is not two dimensional or holds a non-finite cost.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2:
        if cost.size == 0:
            return []
        raise InvalidMatrixError(
            "cost matrix must be 2-d, got shape {s}".format(s=cost.shape))
    if not np.all(np.isfinite(cost)):
        bad = np.argwhere(~np.isfinite(cost))[0]
        raise InvalidMatrixError(textwrap.dedent("""\
            cost matrix holds a non-finite value
              at: {at}
              value: {v}\
            """).format(at=tuple(int(i) for i in bad), v=cost[tuple(bad)]))

    n_rows, n_cols = cost.shape
    if n_rows == 0 or n_cols == 0:
        return []

    n = max(n_rows, n_cols)
    padded = np.full((n, n), SENTINEL_COST)
    padded[:n_rows, :n_cols] = cost

    # sums over sentinel cells carry rounding at the sentinel scale
    tol = (1e-9 * max(1.0, float(np.abs(cost).max())) +
           2 * n * np.spacing(SENTINEL_COST))
    cols = _lexicographic(padded, tol)

    return [(row, col) for row, col in enumerate(cols)
            if row < n_rows and col < n_cols]


@public
def associate(predicted, detected, iou_min=DEFAULT_IOU_MIN):
    """Match predicted track boxes to detected boxes.

    The cost of a pair is `1 - IoU`; after the optimal assignment any pair
    with `IoU < iou_min` is split and both sides reported as unmatched.

    Parameters
    ----------
    predicted: list of BoundingBox
    detected: list of BoundingBox
    iou_min: float
        Gating threshold in `[0, 1]`.

    Returns
    -------
    result: AssignmentResult
    """
    if not 0.0 <= iou_min <= 1.0:
        raise ValueError("iou_min outside [0, 1]: {v}".format(v=iou_min))

    ious = iou_matrix(predicted, detected)
    pairs = hungarian(1.0 - ious) if ious.size else []

    matches = []
    for t, d in pairs:
        if ious[t, d] >= iou_min:
            matches.append((t, d))
        else:
            debug("gated pair track {t} / detection {d}: iou {v:.3f}".format(
                t=t, d=d, v=ious[t, d]))

    matched_t = {t for t, _ in matches}
    matched_d = {d for _, d in matches}
    return AssignmentResult(
        matches=matches,
        unmatched_tracks=[t for t in range(len(predicted))
                          if t not in matched_t],
        unmatched_detections=[d for d in range(len(detected))
                              if d not in matched_d],
    )
