"""Scikit-learn-style estimator wrapping the fine-tune/predict pipeline.

The estimator follows the sklearn contract (``fit`` returns self, fitted
state lives in trailing-underscore attributes, ``get_params``/``set_params``
round-trip the constructor arguments) without depending on scikit-learn,
so it composes with ecosystem tooling that duck-types estimators.
"""

from __future__ import annotations

import inspect
from typing import Sequence

from .alignment import AlignmentSet, GoldAlignment, to_subword_alignment
from .corpus import CorpusHandle
from .encoder import EncoderParams
from .errors import NotFittedError, ValidationError
from .evaluation import corpus_eval
from .objective import Weights
from .alignment import SubwordMap
from .similarity import PredictConfig
from .training import EpochStats, Monitor, TrainConfig, finetune, predict_corpus


def expand_weights(
    word_align: AlignmentSet,
    weights: Weights | None,
    src_map: SubwordMap,
    tgt_map: SubwordMap,
) -> Weights | None:
    """Propagate word-level link weights to every descendant subword link;
    subword-granularity inputs pass through unchanged."""
    if weights is None or word_align.granularity == "subword":
        return weights
    src_owners: dict[int, list[int]] = {}
    tgt_owners: dict[int, list[int]] = {}
    for sub, word in enumerate(src_map.word_of_subword):
        src_owners.setdefault(word, []).append(sub)
    for sub, word in enumerate(tgt_map.word_of_subword):
        tgt_owners.setdefault(word, []).append(sub)
    expanded: Weights = {}
    for (wi, wj), w in weights.items():
        for si in src_owners.get(wi, ()):
            for tj in tgt_owners.get(wj, ()):
                expanded[(si, tj)] = float(w)
    return expanded


class EmbeddingAligner:
    """Word aligner trained on third-party supervision.

    Supervision may be word-granularity (expanded through the corpus
    subword maps) or already subword-granularity.
    """

    def __init__(
        self,
        kind: str = "static",
        dim: int = 32,
        learning_rate: float = 1e-2,
        epochs: int = 10,
        batch_size: int = 8,
        weight_decay: float = 0.01,
        dropout_rate: float = 0.0,
        temperature: float = 1.0,
        threshold: float = 0.1,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        seed: int = 0,
    ):
        self.kind = kind
        self.dim = dim
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.weight_decay = weight_decay
        self.dropout_rate = dropout_rate
        self.temperature = temperature
        self.threshold = threshold
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.seed = seed

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [name for name in sig.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "EmbeddingAligner":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValidationError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, name, value)
        return self

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            batch_size=self.batch_size,
            weight_decay=self.weight_decay,
            dropout_rate=self.dropout_rate,
            seed=self.seed,
            temperature=self.temperature,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            dim=self.dim,
            kind=self.kind,
        )

    def _predict_config(self) -> PredictConfig:
        return PredictConfig(c=self.threshold, temperature=self.temperature)

    @staticmethod
    def _as_subword(
        corpus: CorpusHandle, supervision: Sequence[AlignmentSet]
    ) -> list[AlignmentSet]:
        granularities = {a.granularity for a in supervision}
        if len(granularities) > 1:
            raise ValidationError(f"supervision mixes granularities: {sorted(granularities)}")
        if granularities == {"subword"}:
            return list(supervision)
        return [
            to_subword_alignment(align, smap, tmap)
            for align, smap, tmap in zip(supervision, corpus.src_maps, corpus.tgt_maps)
        ]

    def fit(
        self,
        corpus: CorpusHandle,
        supervision: Sequence[AlignmentSet],
        weights: Sequence[Weights | None] | None = None,
        monitor: Monitor | None = None,
        params_init: EncoderParams | None = None,
    ) -> "EmbeddingAligner":
        if len(supervision) != len(corpus):
            raise ValidationError(
                f"supervision has {len(supervision)} sentences, corpus has {len(corpus)}"
            )
        subword_supervision = self._as_subword(corpus, supervision)
        if weights is not None:
            weights = [
                expand_weights(align, w, smap, tmap)
                for align, w, smap, tmap in zip(
                    supervision, weights, corpus.src_maps, corpus.tgt_maps
                )
            ]
        self.params_, self.history_ = finetune(
            corpus,
            subword_supervision,
            weights=weights,
            config=self._train_config(),
            params=params_init,
            monitor=monitor,
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit before predict/score"
            )

    def predict(self, corpus: CorpusHandle) -> list[AlignmentSet]:
        """Word-granularity alignment predictions, one set per sentence pair."""
        self._check_fitted()
        return predict_corpus(self.params_, corpus, self._predict_config())

    def score(self, corpus: CorpusHandle, gold: Sequence[GoldAlignment]) -> float:
        """1 - corpus AER against gold (higher is better)."""
        report = corpus_eval(self.predict(corpus), list(gold))
        return 1.0 - report.aer

    @property
    def final_stats(self) -> EpochStats:
        self._check_fitted()
        return self.history_[-1]
