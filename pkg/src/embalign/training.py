"""Fine-tuning of the encoder under third-party alignment supervision.

Per batch: encode both sides with the shared encoder, build the cosine
matrix, take the exact objective gradient, backpropagate into the
embedding table (and attention weights), and apply one AdamW step on the
summed batch gradient of -L. Batch order is shuffled by a seeded
generator, so runs are reproducible bit-for-bit on a fixed platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .alignment import AlignmentSet, GoldAlignment, check_alignment_bounds, to_word_alignment
from .corpus import CorpusHandle
from .encoder import EncoderParams, encode, encode_with_cache, encoder_backward, init_params, zero_grads
from .errors import ValidationError
from .objective import Weights, objective_gradient, objective_value, resolve_weights
from .optim import AdamWConfig, OptimState, adamw_step
from .similarity import PredictConfig, bidirectional_softmax, cosine_matrix, predict_links
from . import evaluation


@dataclass(frozen=True)
class TrainConfig:
    """Desk-scale defaults; they differ from full-size language-model
    fine-tuning settings (lr 1e-5, dropout 0.1), which remain selectable."""

    learning_rate: float = 1e-2
    epochs: int = 10
    batch_size: int = 8
    weight_decay: float = 0.01
    dropout_rate: float = 0.0
    seed: int = 0
    temperature: float = 1.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    dim: int = 32
    kind: str = "static"

    def __post_init__(self):
        # lr = 0 is allowed: it is the documented no-op training limit.
        if self.learning_rate < 0:
            raise ValidationError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValidationError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.temperature <= 0:
            raise ValidationError(f"temperature must be > 0, got {self.temperature}")


@dataclass(frozen=True)
class Monitor:
    """Optional per-epoch evaluation: AER against gold, and self-correction
    metrics against a third-party reference when one is given."""

    corpus: CorpusHandle
    gold: tuple[GoldAlignment, ...]
    reference: tuple[AlignmentSet, ...] | None = None
    predict: PredictConfig = field(default_factory=PredictConfig)

    def __post_init__(self):
        if len(self.gold) != len(self.corpus):
            raise ValidationError("monitor gold length does not match monitor corpus")
        if self.reference is not None and len(self.reference) != len(self.corpus):
            raise ValidationError("monitor reference length does not match monitor corpus")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_neg_objective: float
    aer: float | None = None
    new_precision: float | None = None
    del_rate: float | None = None
    remain_precision: float | None = None


def sentence_objective(
    params: EncoderParams,
    src_ids: Sequence[int],
    tgt_ids: Sequence[int],
    supervision: AlignmentSet,
    weights: Weights | None = None,
    temperature: float = 1.0,
) -> float:
    M = cosine_matrix(encode(params, src_ids), encode(params, tgt_ids))
    return objective_value(M, supervision, weights, temperature)


def sentence_gradient(
    params: EncoderParams,
    src_ids: Sequence[int],
    tgt_ids: Sequence[int],
    supervision: AlignmentSet,
    weights: Weights | None = None,
    temperature: float = 1.0,
    grads: dict[str, np.ndarray] | None = None,
    dropout_masks: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Objective value and parameter gradients of L for one sentence pair.

    Gradients flow into both sentences' embeddings through the shared
    encoder. Accumulates into ``grads`` when given.
    """
    if grads is None:
        grads = zero_grads(params)
    src_mask, tgt_mask = dropout_masks if dropout_masks is not None else (None, None)
    hs, src_cache = encode_with_cache(params, src_ids, src_mask)
    ht, tgt_cache = encode_with_cache(params, tgt_ids, tgt_mask)
    M = hs @ ht.T
    value = objective_value(M, supervision, weights, temperature)
    dM = objective_gradient(M, supervision, weights, temperature)
    encoder_backward(params, src_cache, dM @ ht, grads)
    encoder_backward(params, tgt_cache, dM.T @ hs, grads)
    return value, grads


def _corpus_ids(corpus: CorpusHandle, params: EncoderParams):
    return [
        (params.ids_for(smap.subword_tokens), params.ids_for(tmap.subword_tokens))
        for smap, tmap in zip(corpus.src_maps, corpus.tgt_maps)
    ]


def predict_corpus(
    params: EncoderParams, corpus: CorpusHandle, config: PredictConfig | None = None
) -> list[AlignmentSet]:
    """Word-level predictions for every sentence pair in the corpus."""
    config = config or PredictConfig()
    out = []
    for smap, tmap in zip(corpus.src_maps, corpus.tgt_maps):
        hs = encode(params, params.ids_for(smap.subword_tokens))
        ht = encode(params, params.ids_for(tmap.subword_tokens))
        probs = bidirectional_softmax(hs @ ht.T, config.temperature)
        sub = predict_links(probs, config)
        out.append(to_word_alignment(sub, smap, tmap))
    return out


DEFAULT_THRESHOLD_GRID = (0.05, 0.08, 0.1, 0.12, 0.15, 0.18, 0.22)


def tune_threshold(
    params: EncoderParams,
    dev_corpus: CorpusHandle,
    dev_gold: Sequence[GoldAlignment],
    grid: Sequence[float] = DEFAULT_THRESHOLD_GRID,
    temperature: float = 1.0,
) -> tuple[float, float]:
    """Pick the prediction threshold minimizing dev-set AER (ties keep the
    smaller threshold). Returns (threshold, dev_aer)."""
    if not grid:
        raise ValidationError("threshold grid must be non-empty")
    best: tuple[float, float] | None = None
    for c in grid:
        preds = predict_corpus(params, dev_corpus, PredictConfig(c=c, temperature=temperature))
        dev_aer = evaluation.corpus_eval(preds, list(dev_gold)).aer
        if best is None or dev_aer < best[1]:
            best = (c, dev_aer)
    return best


def _validate_supervision(corpus: CorpusHandle, supervision: Sequence[AlignmentSet]):
    if len(supervision) != len(corpus):
        raise ValidationError(
            f"supervision has {len(supervision)} sentences, corpus has {len(corpus)}"
        )
    for k, (align, smap, tmap) in enumerate(zip(supervision, corpus.src_maps, corpus.tgt_maps)):
        if align.granularity != "subword":
            raise ValidationError(
                f"supervision for pair {k} must be subword-granularity, got {align.granularity}"
            )
        check_alignment_bounds(align, smap.subword_count, tmap.subword_count, f"supervision {k}")


def _monitor_stats(params: EncoderParams, monitor: Monitor, epoch: int, mean_neg: float) -> EpochStats:
    preds = predict_corpus(params, monitor.corpus, monitor.predict)
    report = evaluation.corpus_eval(preds, list(monitor.gold))
    if monitor.reference is None:
        return EpochStats(epoch, mean_neg, aer=report.aer)
    sc = evaluation.corpus_self_correction(preds, list(monitor.reference), list(monitor.gold))
    return EpochStats(
        epoch,
        mean_neg,
        aer=report.aer,
        new_precision=sc.new_precision,
        del_rate=sc.del_rate,
        remain_precision=sc.remain_precision,
    )


def finetune(
    corpus: CorpusHandle,
    supervision: Sequence[AlignmentSet],
    weights: Sequence[Weights | None] | None = None,
    config: TrainConfig | None = None,
    params: EncoderParams | None = None,
    monitor: Monitor | None = None,
) -> tuple[EncoderParams, list[EpochStats]]:
    """Train the encoder to maximize the supervised objective.

    ``supervision`` is one subword-granularity alignment set per sentence
    pair; ``weights`` optionally maps supervised links to [0, 1] weights.
    Returns the trained parameters and per-epoch history.
    """
    config = config or TrainConfig()
    _validate_supervision(corpus, supervision)
    if weights is not None:
        if len(weights) != len(corpus):
            raise ValidationError(f"weights has {len(weights)} sentences, corpus has {len(corpus)}")
        weights = [resolve_weights(a, w) for a, w in zip(supervision, weights)]
    else:
        weights = [None] * len(corpus)
    if params is None:
        tokens = [
            tok
            for smap, tmap in zip(corpus.src_maps, corpus.tgt_maps)
            for tok in (*smap.subword_tokens, *tmap.subword_tokens)
        ]
        params = init_params(tokens, dim=config.dim, kind=config.kind, seed=config.seed)
    else:
        params = params.copy()

    ids = _corpus_ids(corpus, params)
    rng = np.random.default_rng(config.seed)
    opt_cfg = AdamWConfig(
        learning_rate=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        eps=config.eps,
        weight_decay=config.weight_decay,
    )
    state = OptimState.for_tensors(params.tensors())
    history: list[EpochStats] = []
    n = len(corpus)
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        total_objective = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            grads = zero_grads(params)
            for k in batch:
                src_ids, tgt_ids = ids[k]
                masks = None
                if config.dropout_rate > 0.0:
                    keep = 1.0 - config.dropout_rate
                    masks = (
                        (rng.random((len(src_ids), params.dim)) < keep) / keep,
                        (rng.random((len(tgt_ids), params.dim)) < keep) / keep,
                    )
                value, _ = sentence_gradient(
                    params, src_ids, tgt_ids, supervision[k], weights[k],
                    config.temperature, grads, masks,
                )
                total_objective += value
            # Optimizer minimizes -L: flip the accumulated ascent direction.
            neg = {name: -g for name, g in grads.items()}
            tensors, state = adamw_step(params.tensors(), neg, state, opt_cfg)
            params.embed = tensors["embed"]
            if params.kind == "attn1":
                params.wq = tensors["wq"]
                params.wk = tensors["wk"]
                params.wv = tensors["wv"]
        mean_neg = -total_objective / n
        if monitor is not None:
            history.append(_monitor_stats(params, monitor, epoch, mean_neg))
        else:
            history.append(EpochStats(epoch, mean_neg))
    return params, history
