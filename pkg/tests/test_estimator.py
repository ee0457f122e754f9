import pytest

from embalign.alignment import AlignmentSet, SubwordMap
from embalign.errors import NotFittedError, ValidationError
from embalign.estimator import EmbeddingAligner, expand_weights
from embalign.evaluation import corpus_eval
from embalign.synthetic import SyntheticSpec, synthesize_corpus


@pytest.fixture(scope="module")
def problem():
    spec = SyntheticSpec(
        vocab_size=15, pair_count=120, min_len=4, max_len=7,
        swap_rate=0.3, corruption_rate=0.0, seed=21,
    )
    return synthesize_corpus(spec)


class TestSklearnContract:
    def test_get_params_round_trip(self):
        aligner = EmbeddingAligner(learning_rate=0.005, epochs=3)
        params = aligner.get_params()
        assert params["learning_rate"] == 0.005
        assert params["epochs"] == 3
        clone = EmbeddingAligner(**params)
        assert clone.get_params() == params

    def test_set_params_returns_self(self):
        aligner = EmbeddingAligner()
        assert aligner.set_params(threshold=0.2) is aligner
        assert aligner.threshold == 0.2

    def test_set_params_rejects_unknown(self):
        with pytest.raises(ValidationError, match="invalid parameter"):
            EmbeddingAligner().set_params(learning_rte=0.1)

    def test_sklearn_clone_compatible(self):
        sklearn = pytest.importorskip("sklearn.base")
        aligner = EmbeddingAligner(epochs=2, dim=8)
        clone = sklearn.clone(aligner)
        assert clone.get_params() == aligner.get_params()

    def test_predict_before_fit_raises(self, problem):
        corpus, _, _ = problem
        with pytest.raises(NotFittedError):
            EmbeddingAligner().predict(corpus)


class TestFitPredict:
    def test_learns_and_scores(self, problem):
        corpus, gold, supervision = problem
        aligner = EmbeddingAligner(
            epochs=5, learning_rate=5e-3, seed=21, threshold=0.2, dim=16
        )
        assert aligner.fit(corpus, supervision) is aligner
        preds = aligner.predict(corpus)
        assert len(preds) == len(corpus)
        assert all(p.granularity == "word" for p in preds)
        score = aligner.score(corpus, gold)
        assert score == pytest.approx(1 - corpus_eval(preds, gold).aer)
        assert score > 0.6

    def test_accepts_subword_supervision(self, problem):
        corpus, _, supervision = problem
        subword = [AlignmentSet(s.pairs, "subword") for s in supervision]
        aligner = EmbeddingAligner(epochs=1, seed=1)
        aligner.fit(corpus, subword)
        assert hasattr(aligner, "params_")

    def test_rejects_mixed_granularity(self, problem):
        corpus, _, supervision = problem
        mixed = list(supervision)
        mixed[0] = AlignmentSet(mixed[0].pairs, "subword")
        with pytest.raises(ValidationError, match="granularit"):
            EmbeddingAligner(epochs=1).fit(corpus, mixed)

    def test_history_recorded(self, problem):
        corpus, _, supervision = problem
        aligner = EmbeddingAligner(epochs=2, seed=3).fit(corpus, supervision)
        assert len(aligner.history_) == 2
        assert aligner.final_stats.epoch == 2

    def test_length_mismatch(self, problem):
        corpus, _, supervision = problem
        with pytest.raises(ValidationError):
            EmbeddingAligner(epochs=1).fit(corpus, supervision[:-1])


class TestExpandWeights:
    def test_word_weights_reach_all_subword_pairs(self):
        src = SubwordMap(("aa", "ab", "b"), (0, 0, 1))
        tgt = SubwordMap(("x", "y"), (0, 1))
        word = AlignmentSet.of([(0, 0), (1, 1)], "word")
        out = expand_weights(word, {(0, 0): 0.25, (1, 1): 0.75}, src, tgt)
        assert out == {(0, 0): 0.25, (1, 0): 0.25, (2, 1): 0.75}

    def test_none_passthrough(self):
        src = SubwordMap(("a",), (0,))
        assert expand_weights(AlignmentSet.of([], "word"), None, src, src) is None
