"""Tests for standpoint_c2.corpus module."""

import random

from hypothesis import given
from hypothesis import strategies as st
from standpoint_c2.corpus import (
    DEFAULT_VOCABULARY,
    MAX_SUBFORMULAS,
    RICH_VOCABULARY,
    dl_corpus,
    hand_written_sentences,
    random_corpus,
    random_structure,
    sentence_corpus,
)
from standpoint_c2.syntax import Signature, is_c2, is_monodic, is_sentence, subformulas


class TestSentenceCorpus:
    """Test seeded sentence corpora."""

    def test_deterministic(self):
        """Test one seed always gives the same corpus."""
        assert random_corpus(11, 20) == random_corpus(11, 20)
        assert random_corpus(11, 20) != random_corpus(12, 20)

    def test_size(self):
        """Test the default corpus has at least fifty sentences."""
        corpus = sentence_corpus(0)
        assert len(corpus) >= 50
        assert len({name for name, _ in corpus}) == len(corpus)

    @given(st.integers(min_value=0, max_value=10_000))
    def test_random_sentences_are_small_monodic_c2(self, seed):
        """Test random sentences are small monodic C2 sentences."""
        for _, f in random_corpus(seed, 5, RICH_VOCABULARY):
            assert is_sentence(f)
            assert is_c2(f)
            assert is_monodic(f)
            assert len(subformulas(f)) <= MAX_SUBFORMULAS

    def test_hand_written(self):
        """Test the hand-written sentences are monodic C2 sentences."""
        for _, f in hand_written_sentences():
            assert is_sentence(f)
            assert is_c2(f)
            assert is_monodic(f)


class TestRandomStructure:
    """Test random structures."""

    def test_rigid_predicates_agree(self):
        """Test rigid predicates share one extension across worlds."""
        signature = DEFAULT_VOCABULARY.signature.merge(Signature(predicates={"E": 1}))
        M = random_structure(random.Random(4), 3, 4, signature, rigid=("E",), density=0.5)
        extensions = {M.gamma[w].unary.get("E", frozenset()) for w in M.worlds}
        assert len(extensions) == 1

    def test_shape(self):
        """Test the structure has the requested sizes and a total constant map."""
        M = random_structure(random.Random(1), 2, 3, RICH_VOCABULARY.signature)
        assert M.domain == ("d0", "d1")
        assert M.worlds == ("w0", "w1", "w2")
        assert set(M.const_map) == {"a"}


class TestDLCorpus:
    """Test seeded DL corpora."""

    def test_deterministic(self):
        """Test one seed always gives the same DL corpus."""
        assert dl_corpus(5, 8) == dl_corpus(5, 8)

    def test_names(self):
        """Test hand-written documents come first."""
        names = [name for name, _ in dl_corpus(0, 3)]
        assert names[:2] == ["tumour", "transitive-R"]
        assert len(names) == len(set(names))
