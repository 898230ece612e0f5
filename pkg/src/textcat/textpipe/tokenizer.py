"""Document text to token stream.

Order matters: stopwords are removed before stemming (the list holds
surface forms), phrase merging runs over stems, and author tokens are
appended after merging so they never participate in a phrase.
"""

from __future__ import annotations

import re
from collections.abc import Iterable

from ..corpus import Document
from .phrases import PhraseList
from .porter import stem

_WORD_RE = re.compile(r"[a-z0-9]+")
_DIGITS_RE = re.compile(r"[0-9]+\Z")
_PREFORMATTED_RE = re.compile(r"[a-z0-9]+_[a-z0-9]+\Z")


def text_tokens(
    text: str,
    phrases: PhraseList,
    stoplist: frozenset[str],
) -> list[str]:
    """Tokenize free text: split, stop, stem, merge phrases."""
    raw = _WORD_RE.findall(text.lower())
    stems = [
        word if _DIGITS_RE.match(word) else stem(word)
        for word in raw
        if word not in stoplist
    ]
    if not phrases.pairs:
        return stems
    merged: list[str] = []
    i = 0
    while i < len(stems):
        if i + 1 < len(stems) and (stems[i], stems[i + 1]) in phrases:
            merged.append(PhraseList.merged((stems[i], stems[i + 1])))
            i += 2
        else:
            merged.append(stems[i])
            i += 1
    return merged


def author_token(name: str) -> str | None:
    """Normalize an author name to an initial_surname token.

    Already-normalized forms (containing "_") pass through lowercased.
    Otherwise the first letter of the first name part becomes the
    initial and the last multi-letter part the surname, so "Y. Togashi",
    "Yuichi Togashi", and "y_togashi" all map to "y_togashi".
    """
    cleaned = name.strip().lower()
    if _PREFORMATTED_RE.match(cleaned):
        return cleaned
    parts = [p for p in re.split(r"[^a-z0-9]+", cleaned) if p]
    if not parts:
        return None
    if len(parts) == 1:
        return f"{parts[0][0]}_{parts[0]}"
    initial = parts[0][0]
    surname_parts = [p for p in parts[1:] if len(p) > 1]
    surname = surname_parts[-1] if surname_parts else parts[-1]
    return f"{initial}_{surname}"


def author_tokens(authors: Iterable[str]) -> list[str]:
    tokens = []
    for name in authors:
        token = author_token(name)
        if token is not None:
            tokens.append(token)
    return tokens


def tokenize(
    doc: Document,
    phrases: PhraseList,
    stoplist: frozenset[str],
) -> list[str]:
    """Full token stream for a document: text tokens then author tokens."""
    return text_tokens(doc.text(), phrases, stoplist) + author_tokens(doc.authors)
