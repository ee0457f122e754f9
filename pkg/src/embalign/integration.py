"""Combining alignments from multiple third-party aligners.

Each aligner gets one corpus-global credit: the softmax over negative
development-set error rates (fractions in [0, 1], not percentages). A
link's total credit is the sum of credits of the aligners that propose
it, which measures agreement weighted by aligner quality. Filtering keeps
links with total credit strictly above f; weighting maps total credit
through a sigmoid of steepness lambda centered at f.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

from .alignment import AlignmentSet
from .errors import ParseError, ValidationError
from .objective import Weights
from .pharaoh import read_alignment_file


@dataclass(frozen=True)
class AlignerRecord:
    """One aligner's per-sentence alignment sets plus its dev-set AER."""

    name: str
    per_sentence: tuple[AlignmentSet, ...]
    dev_aer: float

    def __post_init__(self):
        if not self.name:
            raise ValidationError("aligner name must be non-empty")
        if not 0.0 <= self.dev_aer <= 1.0:
            raise ValidationError(
                f"dev_aer must be a fraction in [0, 1], got {self.dev_aer} for {self.name}"
            )
        if not self.per_sentence:
            raise ValidationError(f"aligner {self.name} has no sentences")


@dataclass(frozen=True)
class IntegrationConfig:
    f: float = 0.45
    steepness: float = 0.5  # the sigmoid's lambda

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise ValidationError(f"filter threshold f must be in [0, 1], got {self.f}")
        if self.steepness <= 0:
            raise ValidationError(f"lambda must be > 0, got {self.steepness}")


def _check_compatible(records: Sequence[AlignerRecord]):
    if not records:
        raise ValidationError("need at least one aligner record")
    n = len(records[0].per_sentence)
    granularity = records[0].per_sentence[0].granularity
    for rec in records:
        if len(rec.per_sentence) != n:
            raise ValidationError(
                f"aligner {rec.name} covers {len(rec.per_sentence)} sentences, expected {n}"
            )
        for align in rec.per_sentence:
            if align.granularity != granularity:
                raise ValidationError(
                    f"aligner {rec.name} mixes granularities ({align.granularity} vs {granularity})"
                )


def aligner_credits(records: Sequence[AlignerRecord]) -> list[float]:
    """Softmax over negative dev AERs; positive, sums to 1."""
    _check_compatible(records)
    scores = [-rec.dev_aer for rec in records]
    peak = max(scores)
    exps = [math.exp(s - peak) for s in scores]
    total = sum(exps)
    return [e / total for e in exps]


def total_credit(
    pair: tuple[int, int],
    sentence_index: int,
    records: Sequence[AlignerRecord],
    credits: Sequence[float],
) -> float:
    """Summed credit of the aligners proposing the pair in this sentence."""
    if not 0 <= sentence_index < len(records[0].per_sentence):
        raise ValidationError(f"sentence index {sentence_index} out of range")
    return sum(
        credit
        for rec, credit in zip(records, credits)
        if pair in rec.per_sentence[sentence_index]
    )


def _sigmoid(z: float) -> float:
    # branch on sign so exp never overflows
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def _union_pairs(records: Sequence[AlignerRecord], k: int) -> set[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()
    for rec in records:
        pairs |= rec.per_sentence[k].pairs
    return pairs


def filter_by_credit(
    records: Sequence[AlignerRecord], credits: Sequence[float], f: float = 0.45
) -> list[AlignmentSet]:
    """Per sentence, the union links whose total credit strictly exceeds f."""
    _check_compatible(records)
    granularity = records[0].per_sentence[0].granularity
    out = []
    for k in range(len(records[0].per_sentence)):
        kept = {
            pair
            for pair in _union_pairs(records, k)
            if total_credit(pair, k, records, credits) > f
        }
        out.append(AlignmentSet(frozenset(kept), granularity))
    return out


def weight_by_credit(
    records: Sequence[AlignerRecord],
    credits: Sequence[float],
    config: IntegrationConfig | None = None,
) -> list[Weights]:
    """Per sentence, sigmoid weights over the union:
    w = 1 / (1 + exp(-lambda * (total_credit - f)))."""
    _check_compatible(records)
    config = config or IntegrationConfig()
    out = []
    for k in range(len(records[0].per_sentence)):
        weights = {}
        for pair in _union_pairs(records, k):
            credit = total_credit(pair, k, records, credits)
            weights[pair] = _sigmoid(config.steepness * (credit - config.f))
        out.append(weights)
    return out


def combine(records: Sequence[AlignerRecord], mode: str) -> list[AlignmentSet]:
    """Per-sentence set union or intersection across all aligners."""
    if mode not in ("union", "intersection"):
        raise ValidationError(f"mode must be 'union' or 'intersection', got {mode!r}")
    _check_compatible(records)
    granularity = records[0].per_sentence[0].granularity
    out = []
    for k in range(len(records[0].per_sentence)):
        if mode == "union":
            pairs = _union_pairs(records, k)
        else:
            pairs = set(records[0].per_sentence[k].pairs)
            for rec in records[1:]:
                pairs &= rec.per_sentence[k].pairs
        out.append(AlignmentSet(frozenset(pairs), granularity))
    return out


def read_manifest(path, index_base: int = 0) -> list[AlignerRecord]:
    """Read aligner records from a manifest of tab-separated
    ``name <tab> pharaoh_path <tab> dev_aer`` lines. Relative paths are
    resolved against the manifest's directory."""
    records = []
    base_dir = os.path.dirname(os.path.abspath(path))
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(
                    f"manifest line must be 'name\\tpath\\tdev_aer', got {line!r}", line=line_no
                )
            name, rel_path, aer_text = (p.strip() for p in parts)
            try:
                dev_aer = float(aer_text)
            except ValueError:
                raise ParseError(f"bad dev_aer {aer_text!r}", line=line_no) from None
            full = rel_path if os.path.isabs(rel_path) else os.path.join(base_dir, rel_path)
            sets = tuple(read_alignment_file(full, index_base))
            if not sets:
                raise ParseError(f"aligner file {full} is empty", line=line_no)
            records.append(AlignerRecord(name, sets, dev_aer))
    if not records:
        raise ParseError(f"manifest {path} lists no aligners")
    return records
