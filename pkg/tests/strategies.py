"""Hypothesis strategies built on the seeded corpus generators."""

import random

from hypothesis import strategies as st
from standpoint_c2.corpus import (
    DEFAULT_VOCABULARY,
    RICH_VOCABULARY,
    DLVocabulary,
    Vocabulary,
    random_concept,
    random_dl_sentence,
    random_sentence,
    random_structure,
)
from standpoint_c2.suites import DL_SIGNATURE

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def monodic_sentences(draw, vocab: Vocabulary = RICH_VOCABULARY, max_size: int = 9):
    rng = random.Random(draw(seeds))
    return random_sentence(rng, draw(st.integers(min_value=2, max_value=max_size)), vocab)


@st.composite
def frugal_candidates(draw, max_size: int = 7):
    """Sentences over P, Q and R with star diamonds only."""
    rng = random.Random(draw(seeds))
    return random_sentence(rng, draw(st.integers(min_value=2, max_value=max_size)), DEFAULT_VOCABULARY)


@st.composite
def structures(draw, vocab: Vocabulary = DEFAULT_VOCABULARY, max_domain: int = 2, max_worlds: int = 2):
    rng = random.Random(draw(seeds))
    return random_structure(
        rng,
        draw(st.integers(min_value=1, max_value=max_domain)),
        draw(st.integers(min_value=1, max_value=max_worlds)),
        vocab.signature,
    )


@st.composite
def concepts(draw, depth: int = 2):
    rng = random.Random(draw(seeds))
    return random_concept(rng, depth, DLVocabulary())


@st.composite
def dl_sentences(draw, depth: int = 2):
    rng = random.Random(draw(seeds))
    return random_dl_sentence(rng, depth, DLVocabulary())


@st.composite
def dl_structures(draw, max_domain: int = 2, max_worlds: int = 2):
    """Structures over concepts A, B, roles R, S, nominal o and standpoint u."""
    rng = random.Random(draw(seeds))
    return random_structure(
        rng,
        draw(st.integers(min_value=1, max_value=max_domain)),
        draw(st.integers(min_value=1, max_value=max_worlds)),
        DL_SIGNATURE,
    )
