"""Lexicon construction: which tokens become vector dimensions.

Document frequency is counted once per document. Tokens below the
df threshold are dropped. The surviving terms are ordered by
descending df, ties broken lexicographically, so the index of a
term is reproducible from the corpus alone.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..corpus import Corpus
from ..errors import LexiconError
from .phrases import PhraseList
from .porter import stem
from .tokenizer import text_tokens, tokenize

_DIGITS = frozenset("0123456789")


@dataclass(frozen=True)
class Lexicon:
    """Immutable term table with document frequencies."""

    terms: tuple[str, ...]
    df: tuple[int, ...]
    n_docs: int
    df_threshold: int
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.terms) != len(self.df):
            raise LexiconError("terms and df lengths differ")
        if not self.terms:
            raise LexiconError("empty lexicon: no token cleared the df threshold")
        if self.n_docs <= 0:
            raise LexiconError("lexicon requires a nonempty corpus")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})
        if len(self.index) != len(self.terms):
            raise LexiconError("duplicate term in lexicon")

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


def build_lexicon(
    corpus: Corpus,
    phrases: PhraseList,
    stoplist: frozenset[str],
    df_threshold: int = 2,
) -> Lexicon:
    """Count document frequencies over the corpus and keep df >= threshold."""
    if df_threshold < 1:
        raise LexiconError(f"df_threshold must be >= 1, got {df_threshold}")
    if len(corpus) == 0:
        raise LexiconError("lexicon requires a nonempty corpus")
    counts: Counter[str] = Counter()
    for doc in corpus:
        counts.update(set(tokenize(doc, phrases, stoplist)))
    kept = [(t, c) for t, c in counts.items() if c >= df_threshold]
    if not kept:
        raise LexiconError("empty lexicon: no token cleared the df threshold")
    kept.sort(key=lambda item: (-item[1], item[0]))
    terms, dfs = zip(*kept)
    return Lexicon(terms=terms, df=dfs, n_docs=len(corpus), df_threshold=df_threshold)


def suggest_phrases(
    corpus: Corpus,
    stoplist: frozenset[str],
    k: int = 200,
) -> list[tuple[tuple[str, str], int]]:
    """Rank adjacent stem pairs by corpus occurrence count.

    Candidates containing a stopword stem or a pure-digit token are
    excluded; the result seeds a hand-curated phrase list.
    """
    stop_stems = {stem(w) for w in stoplist}
    counts: Counter[tuple[str, str]] = Counter()
    empty = PhraseList()
    for doc in corpus:
        stems = text_tokens(doc.text(), empty, stoplist)
        for first, second in zip(stems, stems[1:]):
            if first in stop_stems or second in stop_stems:
                continue
            if set(first) <= _DIGITS or set(second) <= _DIGITS:
                continue
            counts[(first, second)] += 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def save_lexicon(lexicon: Lexicon, path: str) -> None:
    """Write "n_docs df_threshold" then one "token df" line per term."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{lexicon.n_docs} {lexicon.df_threshold}\n")
        for term, count in zip(lexicon.terms, lexicon.df):
            handle.write(f"{term} {count}\n")


def load_lexicon(path: str) -> Lexicon:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise LexiconError(f"{path}:1: expected 'n_docs df_threshold' header")
        try:
            n_docs, df_threshold = int(header[0]), int(header[1])
        except ValueError as exc:
            raise LexiconError(f"{path}:1: malformed header: {exc}") from exc
        terms: list[str] = []
        dfs: list[int] = []
        for lineno, line in enumerate(handle, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise LexiconError(f"{path}:{lineno}: expected 'token df'")
            try:
                count = int(parts[1])
            except ValueError as exc:
                raise LexiconError(f"{path}:{lineno}: malformed df: {exc}") from exc
            terms.append(parts[0])
            dfs.append(count)
    return Lexicon(
        terms=tuple(terms),
        df=tuple(dfs),
        n_docs=n_docs,
        df_threshold=df_threshold,
    )
