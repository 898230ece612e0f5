"""Ordered stem pairs that the tokenizer merges into single tokens."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexiconError


@dataclass(frozen=True)
class PhraseList:
    """A set of ordered stem pairs, e.g. ("spin", "glass") -> "spin_glass"."""

    pairs: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self) -> None:
        for pair in self.pairs:
            if len(pair) != 2 or not all(p and "_" not in p and " " not in p for p in pair):
                raise LexiconError(f"phrase must be a pair of plain stems, got {pair!r}")

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    @staticmethod
    def merged(pair: tuple[str, str]) -> str:
        return f"{pair[0]}_{pair[1]}"


def load_phrases(path: str) -> PhraseList:
    """Read a phrase file: two space-separated stems per line, blanks ignored."""
    pairs = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise LexiconError(f"{path}:{lineno}: expected two stems, got {len(parts)}")
            pairs.add((parts[0], parts[1]))
    return PhraseList(frozenset(pairs))


def save_phrases(phrases: PhraseList, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for first, second in sorted(phrases.pairs):
            handle.write(f"{first} {second}\n")
