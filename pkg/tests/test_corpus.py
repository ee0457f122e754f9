import pytest

from embalign.corpus import (
    CorpusHandle,
    build_corpus,
    read_parallel_corpus,
    read_subword_maps,
    slice_corpus,
    split_word,
    subword_map_for,
    write_subword_maps,
)
from embalign.errors import ParseError, ValidationError


def write_corpus(tmp_path, src_lines, tgt_lines):
    src = tmp_path / "c.src"
    tgt = tmp_path / "c.tgt"
    src.write_text("\n".join(src_lines) + "\n")
    tgt.write_text("\n".join(tgt_lines) + "\n")
    return src, tgt


class TestRead:
    def test_identity_maps(self, tmp_path):
        src, tgt = write_corpus(tmp_path, ["a b"], ["x"])
        corpus = read_parallel_corpus(src, tgt)
        pair = corpus.pairs[0]
        assert pair.source_tokens == ("a", "b")
        assert pair.target_tokens == ("x",)
        assert corpus.src_maps[0].word_of_subword == (0, 1)
        assert corpus.tgt_maps[0].word_of_subword == (0,)

    def test_char_bigram_split(self):
        assert split_word("abcdef", "char_bigram") == ["abc", "cde", "ef"]
        assert split_word("abcd", "char_bigram") == ["abcd"]
        smap = subword_map_for(["abcdef", "go"], "char_bigram")
        assert smap.subword_tokens == ("abc", "cde", "ef", "go")
        assert smap.word_of_subword == (0, 0, 0, 1)

    def test_char_bigram_pieces_cover_word(self, rng):
        letters = "abcdefghijklmnop"
        for _ in range(100):
            n = int(rng.integers(1, 16))
            word = "".join(rng.choice(list(letters), size=n))
            pieces = split_word(word, "char_bigram")
            rebuilt = pieces[0] + "".join(p[1:] for p in pieces[1:])
            assert rebuilt == word

    def test_line_count_mismatch(self, tmp_path):
        src, tgt = write_corpus(tmp_path, ["a", "b"], ["x"])
        with pytest.raises(ValidationError, match="mismatch"):
            read_parallel_corpus(src, tgt)

    def test_empty_line_reports_number(self, tmp_path):
        src, tgt = write_corpus(tmp_path, ["a", "", "c"], ["x", "y", "z"])
        with pytest.raises(ParseError, match="line 2"):
            read_parallel_corpus(src, tgt)

    def test_unknown_mode(self, tmp_path):
        src, tgt = write_corpus(tmp_path, ["a"], ["x"])
        with pytest.raises(ValidationError):
            read_parallel_corpus(src, tgt, "bpe")


class TestHandle:
    def test_length_consistency_enforced(self):
        corpus = build_corpus([["a"]], [["x"]])
        with pytest.raises(ValidationError):
            CorpusHandle(corpus.pairs, (), corpus.tgt_maps)

    def test_slice(self):
        corpus = build_corpus([["a"], ["b"], ["c"]], [["x"], ["y"], ["z"]])
        part = slice_corpus(corpus, 1, 3)
        assert len(part) == 2
        assert part.pairs[0].source_tokens == ("b",)
        with pytest.raises(ValidationError):
            slice_corpus(corpus, 2, 2)


class TestSidecarMaps:
    def test_round_trip(self, tmp_path):
        corpus = build_corpus([["abcdef", "hi"]], [["xyzzyx"]], "char_bigram")
        path = tmp_path / "maps.txt"
        write_subword_maps(path, corpus.src_maps)
        back = read_subword_maps(path)
        assert len(back) == 1
        assert back[0].word_of_subword == corpus.src_maps[0].word_of_subword

    def test_invalid_map_rejected(self, tmp_path):
        path = tmp_path / "maps.txt"
        path.write_text("0 2\n")
        with pytest.raises(ParseError):
            read_subword_maps(path)
