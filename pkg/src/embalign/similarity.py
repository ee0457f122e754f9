"""Cosine similarity matrices, bidirectional softmax, and link extraction.

The similarity matrix of a sentence pair is the product of unit-normalized
contextual embedding rows, so entries are cosine similarities. Alignment
probabilities are the row softmax (source→target) and column softmax
(target→source) of that matrix; a link is predicted when both directional
probabilities strictly exceed the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .alignment import AlignmentSet
from .errors import ValidationError


class ProbabilityMatrices(NamedTuple):
    s2t: np.ndarray  # rows sum to 1
    t2s: np.ndarray  # columns sum to 1


@dataclass(frozen=True)
class PredictConfig:
    """Extraction threshold; the default matches the common-language-pair
    setting, with 1e-6 as the documented low-threshold alternative."""

    c: float = 0.1
    temperature: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ValidationError(f"threshold c must be in (0, 1), got {self.c}")
        if self.temperature <= 0.0:
            raise ValidationError(f"temperature must be > 0, got {self.temperature}")


def unit_rows(matrix: np.ndarray) -> np.ndarray:
    """Normalize rows to unit Euclidean norm; rejects zero/non-finite rows."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 1:
        raise ValidationError(f"expected a non-empty 2-D array, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise ValidationError("non-finite value in embedding rows")
    norms = np.linalg.norm(matrix, axis=1)
    if (norms < 1e-12).any():
        bad = int(np.argmin(norms))
        raise ValidationError(f"embedding row {bad} has zero norm and cannot be normalized")
    return matrix / norms[:, None]


def check_unit_rows(matrix: np.ndarray, what: str = "embeddings", atol: float = 1e-6):
    norms = np.linalg.norm(np.asarray(matrix, dtype=np.float64), axis=1)
    if not np.allclose(norms, 1.0, atol=atol):
        raise ValidationError(f"{what} rows are not unit-normalized")


def cosine_matrix(hs: np.ndarray, ht: np.ndarray) -> np.ndarray:
    """Pairwise dot products of unit-normalized rows: (m, d) x (n, d) -> (m, n)."""
    hs = np.asarray(hs, dtype=np.float64)
    ht = np.asarray(ht, dtype=np.float64)
    if hs.ndim != 2 or ht.ndim != 2 or hs.shape[1] != ht.shape[1]:
        raise ValidationError(
            f"embedding dimension mismatch: {hs.shape} vs {ht.shape}"
        )
    return hs @ ht.T


def bidirectional_softmax(M: np.ndarray, temperature: float = 1.0) -> ProbabilityMatrices:
    """Row softmax (source→target) and column softmax (target→source) of M,
    computed with max-subtraction for stability."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise ValidationError("non-finite value in similarity matrix")
    if temperature <= 0.0:
        raise ValidationError(f"temperature must be > 0, got {temperature}")
    scaled = M / temperature
    row = np.exp(scaled - scaled.max(axis=1, keepdims=True))
    s2t = row / row.sum(axis=1, keepdims=True)
    col = np.exp(scaled - scaled.max(axis=0, keepdims=True))
    t2s = col / col.sum(axis=0, keepdims=True)
    return ProbabilityMatrices(s2t, t2s)


def predict_links(probs: ProbabilityMatrices, config: PredictConfig) -> AlignmentSet:
    """Threshold intersection: keep (i, j) with both directional
    probabilities strictly greater than c. Subword granularity."""
    s2t, t2s = probs
    if s2t.shape != t2s.shape:
        raise ValidationError(f"probability matrices disagree: {s2t.shape} vs {t2s.shape}")
    keep = (s2t > config.c) & (t2s > config.c)
    pairs = frozenset((int(i), int(j)) for i, j in np.argwhere(keep))
    return AlignmentSet(pairs, "subword")
