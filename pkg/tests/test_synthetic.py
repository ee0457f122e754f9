import pytest

from embalign.errors import ValidationError
from embalign.synthetic import SyntheticSpec, corrupt_alignment, synthesize_corpus


class TestSpec:
    def test_rate_bounds(self):
        with pytest.raises(ValidationError):
            SyntheticSpec(vocab_size=10, pair_count=5, corruption_rate=1.5)

    def test_length_order(self):
        with pytest.raises(ValidationError):
            SyntheticSpec(vocab_size=10, pair_count=5, min_len=6, max_len=3)


class TestGeneration:
    def test_zero_corruption_matches_gold(self):
        spec = SyntheticSpec(vocab_size=30, pair_count=40, seed=3)
        _, gold, supervision = synthesize_corpus(spec)
        for g, s in zip(gold, supervision):
            assert s.pairs == g.sure.pairs

    def test_deterministic(self):
        spec = SyntheticSpec(vocab_size=30, pair_count=25, corruption_rate=0.3, seed=9)
        c1, g1, s1 = synthesize_corpus(spec)
        c2, g2, s2 = synthesize_corpus(spec)
        assert c1 == c2
        assert g1 == g2
        assert s1 == s2

    def test_corruption_count_length_ten(self):
        spec = SyntheticSpec(
            vocab_size=50, pair_count=30, min_len=10, max_len=10,
            corruption_rate=0.2, seed=5,
        )
        _, gold, supervision = synthesize_corpus(spec)
        for g, s in zip(gold, supervision):
            # exactly 2 of 10 links replaced per sentence
            assert len(s.pairs - g.sure.pairs) == 2
            assert len(g.sure.pairs - s.pairs) == 2

    def test_supervision_cardinality_matches_gold(self):
        spec = SyntheticSpec(vocab_size=20, pair_count=50, corruption_rate=0.4, seed=2)
        _, gold, supervision = synthesize_corpus(spec)
        for g, s in zip(gold, supervision):
            assert len(s) == len(g.sure)

    def test_gold_is_a_bijection_within_bounds(self):
        spec = SyntheticSpec(vocab_size=15, pair_count=40, swap_rate=0.5, seed=7)
        corpus, gold, _ = synthesize_corpus(spec)
        for pair, g in zip(corpus.pairs, gold):
            n = len(pair.source_tokens)
            assert len(pair.target_tokens) == n
            assert len(g.sure) == n
            assert {i for i, _ in g.sure.pairs} == set(range(n))
            assert {j for _, j in g.sure.pairs} == set(range(n))

    def test_target_tokens_are_relabeled_sources(self):
        spec = SyntheticSpec(vocab_size=12, pair_count=10, seed=4)
        corpus, gold, _ = synthesize_corpus(spec)
        for pair, g in zip(corpus.pairs, gold):
            for i, j in g.sure.pairs:
                assert pair.target_tokens[j] == "v" + pair.source_tokens[i][1:]

    def test_corpus_level_corruption_fraction(self):
        spec = SyntheticSpec(
            vocab_size=80, pair_count=200, min_len=8, max_len=12,
            corruption_rate=0.25, seed=13,
        )
        _, gold, supervision = synthesize_corpus(spec)
        wrong = sum(len(s.pairs - g.sure.pairs) for g, s in zip(gold, supervision))
        total = sum(len(s) for s in supervision)
        # per-sentence rounding keeps the pooled fraction within 1 link/sentence
        assert abs(wrong / total - 0.25) < 1.0 / 8


class TestCorruptHelper:
    def test_preserves_cardinality_and_bounds(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 9))
            gold = frozenset((i, i) for i in range(n))
            out = corrupt_alignment(gold, n, n, 0.5, rng)
            assert len(out) == n
            assert all(0 <= i < n and 0 <= j < n for i, j in out)

    def test_zero_rate_is_identity(self, rng):
        gold = frozenset({(0, 1), (1, 0)})
        assert corrupt_alignment(gold, 2, 2, 0.0, rng) == gold
