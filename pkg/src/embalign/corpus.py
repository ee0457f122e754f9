"""Parallel corpus reading and subword segmentation.

A corpus is two UTF-8 text files (source / target), one sentence per line,
whitespace-delimited tokens. Subword segmentation is deterministic:

- ``identity``: every word is its own subword.
- ``char_bigram``: words longer than 4 characters split into overlapping
  3-character pieces with stride 2 (``abcdef`` -> ``abc cde ef``); all
  pieces map back to the originating word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alignment import SubwordMap, TokenSentencePair
from .errors import ParseError, ValidationError

SUBWORD_MODES = ("identity", "char_bigram")


@dataclass(frozen=True)
class CorpusHandle:
    """Sentence pairs plus per-side subword maps, index-aligned."""

    pairs: tuple[TokenSentencePair, ...]
    src_maps: tuple[SubwordMap, ...]
    tgt_maps: tuple[SubwordMap, ...]

    def __post_init__(self):
        if not (len(self.pairs) == len(self.src_maps) == len(self.tgt_maps)):
            raise ValidationError("corpus sequences have unequal lengths")
        for k, (pair, smap, tmap) in enumerate(zip(self.pairs, self.src_maps, self.tgt_maps)):
            if smap.word_count != len(pair.source_tokens):
                raise ValidationError(f"source map of pair {k} does not cover all words")
            if tmap.word_count != len(pair.target_tokens):
                raise ValidationError(f"target map of pair {k} does not cover all words")

    def __len__(self) -> int:
        return len(self.pairs)


def split_word(word: str, mode: str) -> list[str]:
    if mode == "identity" or len(word) <= 4:
        return [word]
    return [word[k : k + 3] for k in range(0, len(word) - 1, 2)]


def subword_map_for(tokens: Sequence[str], mode: str) -> SubwordMap:
    if mode not in SUBWORD_MODES:
        raise ValidationError(f"unknown subword mode {mode!r}")
    subwords: list[str] = []
    owners: list[int] = []
    for w, token in enumerate(tokens):
        pieces = split_word(token, mode)
        subwords.extend(pieces)
        owners.extend([w] * len(pieces))
    return SubwordMap(tuple(subwords), tuple(owners))


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def build_corpus(
    src_sentences: Sequence[Sequence[str]],
    tgt_sentences: Sequence[Sequence[str]],
    subword_mode: str = "identity",
) -> CorpusHandle:
    if len(src_sentences) != len(tgt_sentences):
        raise ValidationError(
            f"source has {len(src_sentences)} sentences, target {len(tgt_sentences)}"
        )
    pairs = []
    src_maps = []
    tgt_maps = []
    for k, (src, tgt) in enumerate(zip(src_sentences, tgt_sentences)):
        pairs.append(TokenSentencePair(tuple(src), tuple(tgt), pair_id=k))
        src_maps.append(subword_map_for(src, subword_mode))
        tgt_maps.append(subword_map_for(tgt, subword_mode))
    return CorpusHandle(tuple(pairs), tuple(src_maps), tuple(tgt_maps))


def slice_corpus(corpus: CorpusHandle, start: int, stop: int) -> CorpusHandle:
    """A contiguous sub-corpus view (pair_ids keep their original values)."""
    if not 0 <= start < stop <= len(corpus):
        raise ValidationError(f"bad slice [{start}, {stop}) for corpus of {len(corpus)}")
    return CorpusHandle(
        corpus.pairs[start:stop], corpus.src_maps[start:stop], corpus.tgt_maps[start:stop]
    )


def read_parallel_corpus(src_path, tgt_path, subword_mode: str = "identity") -> CorpusHandle:
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise ValidationError(
            f"line count mismatch: {src_path} has {len(src_lines)}, {tgt_path} has {len(tgt_lines)}"
        )
    for name, lines in ((src_path, src_lines), (tgt_path, tgt_lines)):
        for line_no, line in enumerate(lines, start=1):
            if not line.split():
                raise ParseError(f"empty line in {name}", line=line_no)
    return build_corpus(
        [line.split() for line in src_lines],
        [line.split() for line in tgt_lines],
        subword_mode,
    )


def read_subword_maps(path) -> list[SubwordMap]:
    """Read sidecar subword maps: one line per sentence, whitespace-separated
    word indices (one per subword). Subword token strings are not stored in
    the sidecar; synthetic names are used."""
    maps = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                raise ParseError(f"empty map line in {path}", line=line_no)
            try:
                owners = tuple(int(x) for x in fields)
            except ValueError:
                raise ParseError(f"non-integer map entry in {path}", line=line_no) from None
            tokens = tuple(f"sub{k}" for k in range(len(owners)))
            try:
                maps.append(SubwordMap(tokens, owners))
            except ValidationError as exc:
                raise ParseError(f"invalid subword map: {exc}", line=line_no) from None
    return maps


def write_subword_maps(path, maps: Sequence[SubwordMap]):
    with open(path, "w", encoding="utf-8") as fh:
        for smap in maps:
            fh.write(" ".join(str(w) for w in smap.word_of_subword) + "\n")
