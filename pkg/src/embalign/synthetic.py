"""Seeded synthetic parallel corpora with controllable supervision noise.

Each source sentence is a sequence of tokens ``w<k>`` drawn uniformly from
the vocabulary; the target sentence is the bijective relabeling ``v<k>``
of the same tokens, locally reordered by independent adjacent swaps. The
induced position bijection is the gold alignment (sure = possible). The
supervision is the gold with a controlled share of links replaced by
random wrong links, which fixes the supervision's own error rate while
keeping link counts comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import AlignmentSet, GoldAlignment
from .corpus import CorpusHandle, build_corpus
from .errors import ValidationError


@dataclass(frozen=True)
class SyntheticSpec:
    vocab_size: int
    pair_count: int
    min_len: int = 8
    max_len: int = 12
    swap_rate: float = 0.3
    corruption_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.vocab_size < 1:
            raise ValidationError(f"vocab_size must be >= 1, got {self.vocab_size}")
        if self.pair_count < 1:
            raise ValidationError(f"pair_count must be >= 1, got {self.pair_count}")
        if not 1 <= self.min_len <= self.max_len:
            raise ValidationError(
                f"need 1 <= min_len <= max_len, got ({self.min_len}, {self.max_len})"
            )
        for name in ("swap_rate", "corruption_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {value}")
        if self.seed < 0:
            raise ValidationError(f"seed must be >= 0, got {self.seed}")


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def corrupt_alignment(
    gold_pairs: frozenset[tuple[int, int]],
    src_len: int,
    tgt_len: int,
    rate: float,
    rng: np.random.Generator,
) -> frozenset[tuple[int, int]]:
    """Replace round-half-up(rate * |gold|) links with uniformly random
    wrong links (in bounds, not in gold, deduplicated); cardinality is
    preserved whenever enough wrong links exist."""
    if not 0.0 <= rate <= 1.0:
        raise ValidationError(f"rate must be in [0, 1], got {rate}")
    result = set(gold_pairs)
    n_replace = min(_round_half_up(rate * len(gold_pairs)), len(gold_pairs))
    if n_replace == 0:
        return frozenset(result)
    wrong_pool = [
        (i, j)
        for i in range(src_len)
        for j in range(tgt_len)
        if (i, j) not in gold_pairs
    ]
    # Replacement count capped by the wrong-link pool so the corrupted
    # set's cardinality always equals the gold cardinality.
    n_replace = min(n_replace, len(wrong_pool))
    removable = sorted(gold_pairs)
    for idx in rng.choice(len(removable), size=n_replace, replace=False):
        result.discard(removable[idx])
    for idx in rng.choice(len(wrong_pool), size=n_replace, replace=False):
        result.add(wrong_pool[idx])
    return frozenset(result)


def synthesize_corpus(
    spec: SyntheticSpec,
) -> tuple[CorpusHandle, list[GoldAlignment], list[AlignmentSet]]:
    """Generate (corpus, gold, supervision); fully deterministic given the seed."""
    rng = np.random.default_rng(spec.seed)
    src_sentences = []
    tgt_sentences = []
    golds = []
    supervisions = []
    for _ in range(spec.pair_count):
        length = int(rng.integers(spec.min_len, spec.max_len + 1))
        token_ids = rng.integers(0, spec.vocab_size, size=length)

        # Target order: source positions after independent adjacent swaps.
        order = list(range(length))
        for t in range(length - 1):
            if rng.random() < spec.swap_rate:
                order[t], order[t + 1] = order[t + 1], order[t]
        target_of_source = [0] * length
        for tgt_pos, src_pos in enumerate(order):
            target_of_source[src_pos] = tgt_pos

        src_sentences.append([f"w{k}" for k in token_ids])
        tgt_sentences.append([f"v{token_ids[src_pos]}" for src_pos in order])

        gold_pairs = frozenset((i, target_of_source[i]) for i in range(length))
        gold_set = AlignmentSet(gold_pairs, "word")
        golds.append(GoldAlignment(gold_set, gold_set))

        supervision = corrupt_alignment(gold_pairs, length, length, spec.corruption_rate, rng)
        supervisions.append(AlignmentSet(supervision, "word"))

    corpus = build_corpus(src_sentences, tgt_sentences, subword_mode="identity")
    return corpus, golds, supervisions
