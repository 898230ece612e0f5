"""Lexicon construction: df counting, thresholding, ordering, file I/O."""

import random
from collections import Counter

import pytest

from textcat.corpus import Corpus, Document
from textcat.errors import LexiconError
from textcat.textpipe import (
    PhraseList,
    build_lexicon,
    default_stoplist,
    load_lexicon,
    save_lexicon,
    suggest_phrases,
    tokenize,
)

STOP = default_stoplist()
NO_PHRASES = PhraseList()


def doc(i, abstract, authors=()):
    return Document(
        id=f"d{i}",
        title="",
        abstract=abstract,
        authors=tuple(authors),
        labels=frozenset({"x"}),
    )


def corpus(*abstracts):
    return Corpus([doc(i, a) for i, a in enumerate(abstracts)])


def test_df_counts_each_document_once():
    c = corpus("protein protein folding", "protein networks", "quantum dots")
    lex = build_lexicon(c, NO_PHRASES, STOP, df_threshold=1)
    assert lex.df[lex.index["protein"]] == 2
    assert lex.df[lex.index["fold"]] == 1
    assert lex.n_docs == 3


def test_threshold_drops_rare_terms():
    c = corpus("protein protein folding", "protein networks", "quantum dots")
    lex = build_lexicon(c, NO_PHRASES, STOP, df_threshold=2)
    assert lex.terms == ("protein",)


def test_order_is_df_descending_then_lexicographic():
    c = corpus(
        "alpha beta gamma",
        "alpha beta",
        "alpha zeta gamma",
    )
    lex = build_lexicon(c, NO_PHRASES, STOP, df_threshold=1)
    assert lex.terms == ("alpha", "beta", "gamma", "zeta")
    assert lex.df == (3, 2, 2, 1)


def test_author_tokens_enter_the_lexicon():
    docs = [
        doc(0, "protein folding", authors=("Y. Togashi",)),
        doc(1, "protein dynamics", authors=("Y. Togashi",)),
    ]
    lex = build_lexicon(Corpus(docs), NO_PHRASES, STOP, df_threshold=2)
    assert "y_togashi" in lex
    assert lex.df[lex.index["y_togashi"]] == 2


def test_empty_lexicon_is_an_error():
    c = corpus("protein folding", "quantum dots")
    with pytest.raises(LexiconError):
        build_lexicon(c, NO_PHRASES, STOP, df_threshold=99)


def test_empty_corpus_is_an_error():
    with pytest.raises(LexiconError):
        build_lexicon(Corpus([]), NO_PHRASES, STOP)


def test_df_matches_brute_force_recount():
    rng = random.Random(42)
    vocab = [f"w{i}" for i in range(30)]
    abstracts = [
        " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 25)))
        for _ in range(40)
    ]
    c = corpus(*abstracts)
    lex = build_lexicon(c, NO_PHRASES, STOP, df_threshold=1)
    expected = Counter()
    for d in c:
        expected.update(set(tokenize(d, NO_PHRASES, STOP)))
    assert dict(zip(lex.terms, lex.df)) == dict(expected)
    dfs = list(lex.df)
    assert dfs == sorted(dfs, reverse=True)


def test_threshold_is_monotone():
    rng = random.Random(7)
    vocab = [f"w{i}" for i in range(15)]
    abstracts = [
        " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 12)))
        for _ in range(25)
    ]
    c = corpus(*abstracts)
    previous = None
    for threshold in (1, 2, 3, 5):
        lex = build_lexicon(c, NO_PHRASES, STOP, df_threshold=threshold)
        terms = set(lex.terms)
        if previous is not None:
            assert terms <= previous
        assert min(lex.df) >= threshold
        previous = terms


def test_save_load_round_trip(tmp_path):
    c = corpus("protein protein folding", "protein networks", "quantum dots")
    lex = build_lexicon(c, NO_PHRASES, STOP, df_threshold=1)
    path = str(tmp_path / "lexicon.txt")
    save_lexicon(lex, path)
    loaded = load_lexicon(path)
    assert loaded == lex
    assert loaded.index == lex.index


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a header\nprotein 2\n")
    with pytest.raises(LexiconError):
        load_lexicon(str(path))


def test_suggest_phrases_ranks_by_count():
    c = corpus(
        "spin glass theory",
        "spin glass models of spin glass order",
        "random matrix theory",
    )
    ranked = suggest_phrases(c, STOP, k=3)
    assert ranked[0] == (("spin", "glass"), 3)
    pairs = [pair for pair, _ in ranked]
    assert ("theori", "spin") not in pairs  # crosses a document boundary


def test_suggest_phrases_excludes_stopword_stems_and_digits():
    c = corpus("the 96 protein of the protein 96 set protein 96")
    ranked = suggest_phrases(c, STOP, k=10)
    for (first, second), _ in ranked:
        assert not first.isdigit() and not second.isdigit()
