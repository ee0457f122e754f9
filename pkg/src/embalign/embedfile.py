"""Binary transport format for per-sentence contextual embeddings.

Layout (all integers u32 little-endian, all floats f32 little-endian):

    magic "ALNEMB1\\0" | dim | records...

with each record:

    src_subword_count | tgt_subword_count | src rows | tgt rows (row-major)

Record count is implicit (read until EOF). Values must be finite.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError

MAGIC = b"ALNEMB1\0"
_U32 = struct.Struct("<I")


@dataclass(frozen=True)
class EmbeddingRecordFile:
    """In-memory embedding records; arrays are float32, shape (k, dim)."""

    dim: int
    records: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        converted = []
        for idx, (src, tgt) in enumerate(self.records):
            src = np.ascontiguousarray(src, dtype=np.float32)
            tgt = np.ascontiguousarray(tgt, dtype=np.float32)
            for side, arr in (("source", src), ("target", tgt)):
                if arr.ndim != 2 or arr.shape[1] != self.dim or arr.shape[0] < 1:
                    raise ValidationError(
                        f"record {idx} {side} matrix has shape {arr.shape}, expected (k, {self.dim})"
                    )
                if not np.isfinite(arr).all():
                    raise ValidationError(f"non-finite value in record {idx} ({side})")
            converted.append((src, tgt))
        object.__setattr__(self, "records", tuple(converted))

    def __len__(self) -> int:
        return len(self.records)


def write_embeddings(file: EmbeddingRecordFile, path):
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_U32.pack(file.dim))
        for src, tgt in file.records:
            fh.write(_U32.pack(src.shape[0]))
            fh.write(_U32.pack(tgt.shape[0]))
            fh.write(src.astype("<f4", copy=False).tobytes())
            fh.write(tgt.astype("<f4", copy=False).tobytes())


def _read_exact(fh, n: int, what: str, record: int | None):
    data = fh.read(n)
    if len(data) != n:
        where = f" in record {record}" if record is not None else ""
        raise ParseError(f"truncated embedding file: expected {what}{where}")
    return data


def read_embeddings(path) -> EmbeddingRecordFile:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ParseError(f"bad magic {magic!r}, expected {MAGIC!r}")
        dim = _U32.unpack(_read_exact(fh, 4, "dim", None))[0]
        if dim < 1:
            raise ParseError(f"dim must be >= 1, got {dim}")
        records = []
        index = 0
        while True:
            head = fh.read(4)
            if not head:
                break
            if len(head) != 4:
                raise ParseError(f"truncated embedding file: expected counts in record {index}")
            src_count = _U32.unpack(head)[0]
            tgt_count = _U32.unpack(_read_exact(fh, 4, "counts", index))[0]
            if src_count < 1 or tgt_count < 1:
                raise ParseError(f"record {index} advertises an empty side")
            src = np.frombuffer(
                _read_exact(fh, 4 * src_count * dim, f"{src_count}x{dim} source rows", index),
                dtype="<f4",
            ).reshape(src_count, dim)
            tgt = np.frombuffer(
                _read_exact(fh, 4 * tgt_count * dim, f"{tgt_count}x{dim} target rows", index),
                dtype="<f4",
            ).reshape(tgt_count, dim)
            for side, arr in (("source", src), ("target", tgt)):
                if not np.isfinite(arr).all():
                    raise ParseError(f"non-finite value in record {index} ({side})")
            records.append((src.copy(), tgt.copy()))
            index += 1
    return EmbeddingRecordFile(dim, tuple(records))
