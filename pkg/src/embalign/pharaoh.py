"""Pharaoh-format alignment text files and the weighted-link sidecar format.

One line per sentence pair; each link is a whitespace-separated token.
Sure links are written ``i-j``; possible-only links ``i?j``. On input the
``p`` separator is accepted as a synonym for ``?`` since both occur in
public gold files. The index base (0 or 1) is a caller choice.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .alignment import AlignmentSet, GoldAlignment
from .errors import ParseError, ValidationError

_LINK = re.compile(r"^(\d+)([-?p])(\d+)$")


def _check_base(index_base: int):
    if index_base not in (0, 1):
        raise ValidationError(f"index_base must be 0 or 1, got {index_base}")


def parse_pharaoh_line(line: str, index_base: int = 0, line_no: int | None = None) -> GoldAlignment:
    """Parse one Pharaoh line into a gold alignment (sure + possible)."""
    _check_base(index_base)
    sure: set[tuple[int, int]] = set()
    possible: set[tuple[int, int]] = set()
    column = 0
    for token in line.split():
        column = line.index(token, column)
        m = _LINK.match(token)
        if m is None:
            raise ParseError(f"malformed alignment token {token!r}", line=line_no, column=column)
        i = int(m.group(1)) - index_base
        j = int(m.group(3)) - index_base
        if i < 0 or j < 0:
            raise ParseError(
                f"index below base {index_base} in token {token!r}",
                line=line_no,
                column=column,
            )
        possible.add((i, j))
        if m.group(2) == "-":
            sure.add((i, j))
        column += len(token)
    return GoldAlignment(
        AlignmentSet(frozenset(sure), "word"), AlignmentSet(frozenset(possible), "word")
    )


def serialize_pharaoh(gold: GoldAlignment, index_base: int = 0) -> str:
    """Inverse of :func:`parse_pharaoh_line`; links sorted by (i, j)."""
    _check_base(index_base)
    out = []
    for i, j in sorted(gold.possible.pairs):
        sep = "-" if (i, j) in gold.sure.pairs else "?"
        out.append(f"{i + index_base}{sep}{j + index_base}")
    return " ".join(out)


def read_pharaoh_file(path, index_base: int = 0) -> list[GoldAlignment]:
    golds = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            golds.append(parse_pharaoh_line(line.rstrip("\n"), index_base, line_no=line_no))
    return golds


def write_pharaoh_file(path, golds: Iterable[GoldAlignment], index_base: int = 0):
    with open(path, "w", encoding="utf-8") as fh:
        for gold in golds:
            fh.write(serialize_pharaoh(gold, index_base) + "\n")


def read_alignment_file(path, index_base: int = 0) -> list[AlignmentSet]:
    """Read a Pharaoh file as plain alignment sets (all links, sure or not)."""
    return [g.possible for g in read_pharaoh_file(path, index_base)]


def write_alignment_file(path, sets: Iterable[AlignmentSet], index_base: int = 0):
    golds = [GoldAlignment(a if a.granularity == "word" else AlignmentSet(a.pairs, "word"),
                           AlignmentSet(a.pairs, "word")) for a in sets]
    write_pharaoh_file(path, golds, index_base)


def read_weights_file(path) -> list[dict[tuple[int, int], float]]:
    """Read per-sentence link weights: blocks of ``i j w`` lines, each block
    terminated by one blank line."""
    sentences: list[dict[tuple[int, int], float]] = []
    current: dict[tuple[int, int], float] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                sentences.append(current)
                current = {}
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"expected 'i j w', got {line!r}", line=line_no)
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(f"expected 'i j w', got {line!r}", line=line_no) from None
            if not 0.0 <= w <= 1.0:
                raise ParseError(f"weight {w} outside [0, 1]", line=line_no)
            current[(i, j)] = w
    if current:
        raise ParseError("weights file does not end with a blank block terminator")
    return sentences


def write_weights_file(path, sentences: Sequence[dict[tuple[int, int], float]]):
    with open(path, "w", encoding="utf-8") as fh:
        for weights in sentences:
            for (i, j), w in sorted(weights.items()):
                fh.write(f"{i} {j} {w:.6f}\n")
            fh.write("\n")
