"""Trainable contextual encoder: embedding table, optionally one
self-attention layer, with exact reverse-mode gradients.

Kinds:

- ``static``: output row i is the unit-normalized embedding of token i.
- ``attn1``: h_i = e_i + sum_k softmax_k((Wq e_i)·(Wk e_k)/sqrt(d)) Wv e_k,
  then each h_i is unit-normalized. No positional encodings; the residual
  keeps lexical identity dominant.

The backward pass goes through the normalization Jacobian
(I - h h^T)/||v|| at every position, the attention softmax, and the
embedding lookup (duplicate tokens accumulate).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ValidationError

KINDS = ("static", "attn1")
CHECKPOINT_MAGIC = b"ALNENC1\0"
_U32 = struct.Struct("<I")


@dataclass
class EncoderParams:
    vocab: dict[str, int]
    embed: np.ndarray  # (V, d)
    kind: str = "static"
    wq: np.ndarray | None = None
    wk: np.ndarray | None = None
    wv: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown encoder kind {self.kind!r}")
        self.embed = np.asarray(self.embed, dtype=np.float64)
        if self.embed.ndim != 2 or self.embed.shape[1] < 2:
            raise ValidationError(f"embed must be (V, d) with d >= 2, got {self.embed.shape}")
        if len(self.vocab) != self.embed.shape[0]:
            raise ValidationError("vocab size and embedding row count differ")
        if self.kind == "attn1":
            d = self.dim
            for name in ("wq", "wk", "wv"):
                w = getattr(self, name)
                if w is None:
                    raise ValidationError(f"attn1 encoder requires {name}")
                w = np.asarray(w, dtype=np.float64)
                if w.shape != (d, d):
                    raise ValidationError(f"{name} must be ({d}, {d}), got {w.shape}")
                setattr(self, name, w)

    @property
    def dim(self) -> int:
        return self.embed.shape[1]

    @property
    def vocab_size(self) -> int:
        return self.embed.shape[0]

    def ids_for(self, subwords: Sequence[str]) -> np.ndarray:
        try:
            return np.array([self.vocab[s] for s in subwords], dtype=np.intp)
        except KeyError as exc:
            raise ValidationError(f"subword {exc.args[0]!r} not in encoder vocabulary") from None

    def tensors(self) -> dict[str, np.ndarray]:
        out = {"embed": self.embed}
        if self.kind == "attn1":
            out.update(wq=self.wq, wk=self.wk, wv=self.wv)
        return out

    def copy(self) -> "EncoderParams":
        return EncoderParams(
            dict(self.vocab),
            self.embed.copy(),
            self.kind,
            None if self.wq is None else self.wq.copy(),
            None if self.wk is None else self.wk.copy(),
            None if self.wv is None else self.wv.copy(),
        )


def init_params(
    subwords: Iterable[str], dim: int = 32, kind: str = "static", seed: int = 0
) -> EncoderParams:
    """Fresh parameters over the sorted unique subwords; embedding rows are
    Gaussian with scale 1/sqrt(d) and never the zero vector."""
    if dim < 2:
        raise ValidationError(f"dim must be >= 2, got {dim}")
    vocab = {tok: idx for idx, tok in enumerate(sorted(set(subwords)))}
    if not vocab:
        raise ValidationError("cannot initialize an encoder over an empty vocabulary")
    rng = np.random.default_rng(seed)
    embed = rng.normal(0.0, 1.0 / np.sqrt(dim), size=(len(vocab), dim))
    norms = np.linalg.norm(embed, axis=1)
    while (norms < 1e-3).any():
        bad = norms < 1e-3
        embed[bad] = rng.normal(0.0, 1.0 / np.sqrt(dim), size=(int(bad.sum()), dim))
        norms = np.linalg.norm(embed, axis=1)
    if kind == "attn1":
        wq, wk, wv = (rng.normal(0.0, 1.0 / np.sqrt(dim), size=(dim, dim)) for _ in range(3))
        return EncoderParams(vocab, embed, kind, wq, wk, wv)
    return EncoderParams(vocab, embed, kind)


def zero_grads(params: EncoderParams) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(tensor) for name, tensor in params.tensors().items()}


def _normalize_rows(v: np.ndarray):
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    if (norms < 1e-12).any():
        raise ValidationError("encoder produced a zero hidden row; cannot normalize")
    return v / norms, norms


def encode_with_cache(
    params: EncoderParams, ids: Sequence[int], dropout_mask: np.ndarray | None = None
) -> tuple[np.ndarray, dict]:
    """Forward pass returning unit-norm hidden rows plus the cache needed
    by :func:`encoder_backward`. ``dropout_mask`` (if given) multiplies the
    pre-normalization rows elementwise (inverted dropout, training only)."""
    ids = np.asarray(ids, dtype=np.intp)
    if ids.ndim != 1 or ids.shape[0] < 1:
        raise ValidationError("ids must be a non-empty 1-D sequence")
    if (ids < 0).any() or (ids >= params.vocab_size).any():
        raise ValidationError(f"token id out of range for vocabulary of {params.vocab_size}")
    E = params.embed[ids]
    cache: dict = {"ids": ids, "E": E}
    if params.kind == "static":
        V = E
    else:
        d = params.dim
        Q = E @ params.wq.T
        K = E @ params.wk.T
        U = E @ params.wv.T
        Z = (Q @ K.T) / np.sqrt(d)
        Zs = Z - Z.max(axis=1, keepdims=True)
        expz = np.exp(Zs)
        A = expz / expz.sum(axis=1, keepdims=True)
        V = E + A @ U
        cache.update(Q=Q, K=K, U=U, A=A)
    if dropout_mask is not None:
        V = V * dropout_mask
        cache["dropout_mask"] = dropout_mask
    H, norms = _normalize_rows(V)
    cache.update(H=H, norms=norms)
    return H, cache


def encode(params: EncoderParams, ids: Sequence[int]) -> np.ndarray:
    """Deterministic unit-norm contextual embeddings, one row per subword."""
    return encode_with_cache(params, ids)[0]


def encode_tokens(params: EncoderParams, subwords: Sequence[str]) -> np.ndarray:
    return encode(params, params.ids_for(subwords))


def encoder_backward(
    params: EncoderParams, cache: dict, d_hidden: np.ndarray, grads: dict[str, np.ndarray]
):
    """Accumulate parameter gradients for dL/dH into ``grads`` (in place)."""
    H, norms = cache["H"], cache["norms"]
    d_hidden = np.asarray(d_hidden, dtype=np.float64)
    if d_hidden.shape != H.shape:
        raise ValidationError(f"d_hidden shape {d_hidden.shape} != hidden shape {H.shape}")
    # Through row normalization: dV = (dH - h (h . dH)) / ||v||
    dV = (d_hidden - H * (H * d_hidden).sum(axis=1, keepdims=True)) / norms
    if "dropout_mask" in cache:
        dV = dV * cache["dropout_mask"]
    ids, E = cache["ids"], cache["E"]
    if params.kind == "static":
        dE = dV
    else:
        d = params.dim
        Q, K, U, A = cache["Q"], cache["K"], cache["U"], cache["A"]
        dE = dV.copy()  # residual branch
        dA = dV @ U.T
        dU = A.T @ dV
        dZ = A * (dA - (dA * A).sum(axis=1, keepdims=True))
        dQ = (dZ @ K) / np.sqrt(d)
        dK = (dZ.T @ Q) / np.sqrt(d)
        grads["wq"] += dQ.T @ E
        grads["wk"] += dK.T @ E
        grads["wv"] += dU.T @ E
        dE += dQ @ params.wq + dK @ params.wk + dU @ params.wv
    np.add.at(grads["embed"], ids, dE)


def save_params(params: EncoderParams, path):
    """Versioned binary checkpoint; tensors stored as f32 little-endian."""
    by_id = sorted(params.vocab.items(), key=lambda kv: kv[1])
    if [idx for _, idx in by_id] != list(range(len(by_id))):
        raise ValidationError("vocabulary ids must be a dense range starting at 0")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(_U32.pack(KINDS.index(params.kind)))
        fh.write(_U32.pack(params.vocab_size))
        fh.write(_U32.pack(params.dim))
        for token, _ in by_id:
            raw = token.encode("utf-8")
            fh.write(_U32.pack(len(raw)))
            fh.write(raw)
        for _, tensor in params.tensors().items():
            fh.write(np.ascontiguousarray(tensor, dtype="<f4").tobytes())


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ParseError(f"truncated checkpoint: expected {what}")
    return data


def load_params(path) -> EncoderParams:
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ParseError(f"bad checkpoint magic {magic!r}")
        kind_code = _U32.unpack(_read_exact(fh, 4, "kind"))[0]
        if kind_code >= len(KINDS):
            raise ParseError(f"unknown encoder kind code {kind_code}")
        kind = KINDS[kind_code]
        vocab_size = _U32.unpack(_read_exact(fh, 4, "vocab size"))[0]
        dim = _U32.unpack(_read_exact(fh, 4, "dim"))[0]
        vocab = {}
        for idx in range(vocab_size):
            length = _U32.unpack(_read_exact(fh, 4, f"token {idx} length"))[0]
            vocab[_read_exact(fh, length, f"token {idx}").decode("utf-8")] = idx
        def tensor(rows, cols, what):
            data = _read_exact(fh, 4 * rows * cols, what)
            return np.frombuffer(data, dtype="<f4").reshape(rows, cols).astype(np.float64)
        embed = tensor(vocab_size, dim, "embedding table")
        if kind == "attn1":
            wq = tensor(dim, dim, "wq")
            wk = tensor(dim, dim, "wk")
            wv = tensor(dim, dim, "wv")
            extra = fh.read(1)
            if extra:
                raise ParseError("trailing bytes after checkpoint tensors")
            return EncoderParams(vocab, embed, kind, wq, wk, wv)
        extra = fh.read(1)
        if extra:
            raise ParseError("trailing bytes after checkpoint tensors")
        return EncoderParams(vocab, embed, kind)
