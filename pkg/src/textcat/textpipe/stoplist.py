"""Fixed stopword list, applied before stemming."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..errors import LexiconError


@lru_cache(maxsize=1)
def default_stoplist() -> frozenset[str]:
    """The packaged list of roughly 300 function words."""
    text = (
        resources.files("textcat.textpipe")
        .joinpath("data/stopwords.txt")
        .read_text(encoding="utf-8")
    )
    return frozenset(text.split())


def load_stoplist(path: str) -> frozenset[str]:
    """Read a stoplist file: one lowercase word per line, blanks ignored."""
    words = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            word = line.strip()
            if not word:
                continue
            if word != word.lower() or " " in word:
                raise LexiconError(
                    f"{path}:{lineno}: stopword must be a single lowercase word, got {word!r}"
                )
            words.add(word)
    return frozenset(words)
