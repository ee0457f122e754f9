"""Core alignment data types and word/subword granularity conversion.

All indices are 0-based. An alignment set carries an explicit granularity
tag ("word" or "subword"); operations that would silently mix the two
raise :class:`ValidationError` instead.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal

from .errors import ValidationError

Granularity = Literal["word", "subword"]
Pair = tuple[int, int]

_GRANULARITIES = ("word", "subword")


@dataclass(frozen=True)
class AlignmentSet:
    """A set of (source index, target index) links at one granularity."""

    pairs: frozenset[Pair]
    granularity: Granularity = "word"

    def __post_init__(self):
        if self.granularity not in _GRANULARITIES:
            raise ValidationError(f"unknown granularity {self.granularity!r}")
        if not isinstance(self.pairs, frozenset):
            object.__setattr__(self, "pairs", frozenset(self.pairs))
        for pair in self.pairs:
            i, j = pair
            if i < 0 or j < 0:
                raise ValidationError(f"negative index in alignment pair {pair}")

    @classmethod
    def of(cls, pairs: Iterable[Pair], granularity: Granularity = "word") -> "AlignmentSet":
        return cls(frozenset((int(i), int(j)) for i, j in pairs), granularity)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs)


def require_granularity(align: AlignmentSet, granularity: Granularity, what: str = "alignment"):
    if align.granularity != granularity:
        raise ValidationError(
            f"{what} must be {granularity}-granularity, got {align.granularity}"
        )


@dataclass(frozen=True)
class GoldAlignment:
    """Gold annotation with sure links S and possible links P, S ⊆ P.

    A sure set not contained in the possible set is repaired by unioning
    S into P (with a warning), matching common gold-file practice where
    sure links are implicitly possible.
    """

    sure: AlignmentSet
    possible: AlignmentSet

    def __post_init__(self):
        require_granularity(self.sure, "word", "sure set")
        require_granularity(self.possible, "word", "possible set")
        if not self.sure.pairs <= self.possible.pairs:
            warnings.warn(
                "sure links not contained in possible links; unioning S into P",
                stacklevel=2,
            )
            object.__setattr__(
                self,
                "possible",
                AlignmentSet(self.sure.pairs | self.possible.pairs, "word"),
            )


@dataclass(frozen=True)
class TokenSentencePair:
    """A tokenized parallel sentence pair."""

    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    pair_id: int = 0

    def __post_init__(self):
        if self.pair_id < 0:
            raise ValidationError(f"pair_id must be >= 0, got {self.pair_id}")
        for side, tokens in (("source", self.source_tokens), ("target", self.target_tokens)):
            if len(tokens) < 1:
                raise ValidationError(f"{side} sentence of pair {self.pair_id} is empty")
            for tok in tokens:
                if not tok or any(ch.isspace() for ch in tok):
                    raise ValidationError(
                        f"{side} token {tok!r} of pair {self.pair_id} is empty or has whitespace"
                    )


@dataclass(frozen=True)
class SubwordMap:
    """Subword tokens of one sentence plus the word index owning each subword."""

    subword_tokens: tuple[str, ...]
    word_of_subword: tuple[int, ...]

    def __post_init__(self):
        if len(self.subword_tokens) != len(self.word_of_subword):
            raise ValidationError("subword_tokens and word_of_subword lengths differ")
        if not self.word_of_subword:
            raise ValidationError("subword map is empty")
        prev = self.word_of_subword[0]
        if prev != 0:
            raise ValidationError("word_of_subword must start at 0")
        for idx in self.word_of_subword[1:]:
            if idx not in (prev, prev + 1):
                raise ValidationError(
                    "word_of_subword must be monotone non-decreasing with steps of at most 1"
                )
            prev = idx

    @property
    def subword_count(self) -> int:
        return len(self.word_of_subword)

    @property
    def word_count(self) -> int:
        return self.word_of_subword[-1] + 1

    @classmethod
    def identity(cls, tokens: Iterable[str]) -> "SubwordMap":
        tokens = tuple(tokens)
        return cls(tokens, tuple(range(len(tokens))))


def alignment_violations(align: AlignmentSet, src_len: int, tgt_len: int) -> list[Pair]:
    """Return all pairs with an index out of range; empty list means ok."""
    return sorted(p for p in align.pairs if p[0] >= src_len or p[1] >= tgt_len)


def check_alignment_bounds(align: AlignmentSet, src_len: int, tgt_len: int, what: str = "alignment"):
    bad = alignment_violations(align, src_len, tgt_len)
    if bad:
        raise ValidationError(
            f"{what} has out-of-bounds pairs {bad} for lengths ({src_len}, {tgt_len})"
        )


def to_word_alignment(
    subword_align: AlignmentSet, src_map: SubwordMap, tgt_map: SubwordMap
) -> AlignmentSet:
    """Project a subword alignment to words: two words align if any of
    their subwords align."""
    require_granularity(subword_align, "subword")
    check_alignment_bounds(
        subword_align, src_map.subword_count, tgt_map.subword_count, "subword alignment"
    )
    pairs = {
        (src_map.word_of_subword[i], tgt_map.word_of_subword[j])
        for i, j in subword_align.pairs
    }
    return AlignmentSet(frozenset(pairs), "word")


def to_subword_alignment(
    word_align: AlignmentSet, src_map: SubwordMap, tgt_map: SubwordMap
) -> AlignmentSet:
    """Expand a word alignment to subwords: every subword of an aligned
    source word pairs with every subword of the aligned target word."""
    require_granularity(word_align, "word")
    check_alignment_bounds(word_align, src_map.word_count, tgt_map.word_count, "word alignment")
    src_owners: dict[int, list[int]] = {}
    tgt_owners: dict[int, list[int]] = {}
    for sub, word in enumerate(src_map.word_of_subword):
        src_owners.setdefault(word, []).append(sub)
    for sub, word in enumerate(tgt_map.word_of_subword):
        tgt_owners.setdefault(word, []).append(sub)
    pairs = {
        (si, tj)
        for i, j in word_align.pairs
        for si in src_owners[i]
        for tj in tgt_owners[j]
    }
    return AlignmentSet(frozenset(pairs), "subword")
