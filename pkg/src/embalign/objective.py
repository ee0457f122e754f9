"""The bidirectional fine-tuning objective and its gradient.

For a similarity matrix M (m source subwords x n target subwords) and a
supervision set A, the objective sums the supervised source→target
probabilities averaged over rows plus the supervised target→source
probabilities averaged over columns:

    L = (1/m) sum_{(i,j) in A} w_ij * P_s2t(i, j)
      + (1/n) sum_{(i,j) in A} w_ij * P_t2s(i, j)

Raw probabilities are summed, not log-probabilities. L is maximized;
trainers minimize -L. Weights default to 1 for every supervised link.
"""

from __future__ import annotations

import numpy as np

from .alignment import AlignmentSet, check_alignment_bounds
from .errors import ValidationError
from .similarity import bidirectional_softmax

Weights = dict[tuple[int, int], float]


def resolve_weights(supervision: AlignmentSet, weights: Weights | None) -> Weights:
    """Materialize link weights: every supervised pair defaults to 1,
    overridden by validated explicit entries."""
    resolved = {pair: 1.0 for pair in supervision.pairs}
    if weights is None:
        return resolved
    for pair, w in weights.items():
        if pair not in supervision.pairs:
            raise ValidationError(f"weight for pair {pair} outside the supervision set")
        if not 0.0 <= w <= 1.0:
            raise ValidationError(f"weight {w} for pair {pair} outside [0, 1]")
        resolved[pair] = float(w)
    return resolved


def _weight_matrix(shape, supervision: AlignmentSet, weights: Weights | None) -> np.ndarray:
    m, n = shape
    check_alignment_bounds(supervision, m, n, "supervision")
    resolved = resolve_weights(supervision, weights)
    W = np.zeros(shape)
    for (i, j), w in resolved.items():
        W[i, j] = w
    return W


def objective_value(
    M: np.ndarray,
    supervision: AlignmentSet,
    weights: Weights | None = None,
    temperature: float = 1.0,
) -> float:
    M = np.asarray(M, dtype=np.float64)
    W = _weight_matrix(M.shape, supervision, weights)
    s2t, t2s = bidirectional_softmax(M, temperature)
    m, n = M.shape
    return float((W * s2t).sum() / m + (W * t2s).sum() / n)


def objective_gradient(
    M: np.ndarray,
    supervision: AlignmentSet,
    weights: Weights | None = None,
    temperature: float = 1.0,
) -> np.ndarray:
    """Exact dL/dM via the softmax Jacobian, applied row-wise for the
    source→target term and column-wise for the target→source term."""
    M = np.asarray(M, dtype=np.float64)
    W = _weight_matrix(M.shape, supervision, weights)
    s2t, t2s = bidirectional_softmax(M, temperature)
    m, n = M.shape
    wp_row = W * s2t
    grad_s2t = (wp_row - s2t * wp_row.sum(axis=1, keepdims=True)) / (m * temperature)
    wp_col = W * t2s
    grad_t2s = (wp_col - t2s * wp_col.sum(axis=0, keepdims=True)) / (n * temperature)
    return grad_s2t + grad_t2s
