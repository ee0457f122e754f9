"""embalign: word alignment from supervised contextual embedding fine-tuning."""

from .alignment import (
    AlignmentSet,
    GoldAlignment,
    SubwordMap,
    TokenSentencePair,
    alignment_violations,
    to_subword_alignment,
    to_word_alignment,
)
from .corpus import CorpusHandle, build_corpus, read_parallel_corpus, slice_corpus
from .embedfile import EmbeddingRecordFile, read_embeddings, write_embeddings
from .encoder import EncoderParams, encode, init_params, load_params, save_params
from .errors import NotFittedError, ParseError, ValidationError
from .estimator import EmbeddingAligner
from .evaluation import (
    EvalReport,
    SelfCorrectionReport,
    aer,
    corpus_eval,
    corpus_self_correction,
    precision_recall,
    self_correction,
)
from .integration import (
    AlignerRecord,
    IntegrationConfig,
    aligner_credits,
    combine,
    filter_by_credit,
    total_credit,
    weight_by_credit,
)
from .objective import objective_gradient, objective_value, resolve_weights
from .pharaoh import parse_pharaoh_line, read_pharaoh_file, serialize_pharaoh, write_pharaoh_file
from .similarity import (
    PredictConfig,
    ProbabilityMatrices,
    bidirectional_softmax,
    cosine_matrix,
    predict_links,
    unit_rows,
)
from .synthetic import SyntheticSpec, corrupt_alignment, synthesize_corpus
from .training import EpochStats, Monitor, TrainConfig, finetune, predict_corpus, tune_threshold

__version__ = "0.1.0"

__all__ = [
    "AlignmentSet",
    "AlignerRecord",
    "CorpusHandle",
    "EmbeddingAligner",
    "EmbeddingRecordFile",
    "EncoderParams",
    "EpochStats",
    "EvalReport",
    "GoldAlignment",
    "IntegrationConfig",
    "Monitor",
    "NotFittedError",
    "ParseError",
    "PredictConfig",
    "ProbabilityMatrices",
    "SelfCorrectionReport",
    "SubwordMap",
    "SyntheticSpec",
    "TokenSentencePair",
    "TrainConfig",
    "ValidationError",
    "aer",
    "aligner_credits",
    "alignment_violations",
    "bidirectional_softmax",
    "build_corpus",
    "corrupt_alignment",
    "combine",
    "corpus_eval",
    "corpus_self_correction",
    "cosine_matrix",
    "encode",
    "filter_by_credit",
    "finetune",
    "init_params",
    "load_params",
    "objective_gradient",
    "objective_value",
    "parse_pharaoh_line",
    "precision_recall",
    "predict_corpus",
    "predict_links",
    "read_embeddings",
    "read_parallel_corpus",
    "read_pharaoh_file",
    "resolve_weights",
    "save_params",
    "self_correction",
    "serialize_pharaoh",
    "slice_corpus",
    "synthesize_corpus",
    "to_subword_alignment",
    "to_word_alignment",
    "total_credit",
    "tune_threshold",
    "unit_rows",
    "weight_by_credit",
    "write_embeddings",
    "write_pharaoh_file",
]
