"""Labeled document collections: loading, label binarization, stratified splitting.

A corpus is an immutable, ordered collection of documents read from a
UTF-8 file with one JSON object per line:

    {"id": "...", "title": "...", "abstract": "...",
     "authors": ["f_surname" or "First Last", ...],
     "labels": ["cat", ...], "date": "YYYY-MM"}

Unknown fields are ignored. ``date`` may be missing or null; such
documents land in an "undated" bucket during trend analysis.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass

from .errors import CorpusError

_DATE_RE = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")


@dataclass(frozen=True)
class Document:
    """One document record: metadata only, no full text."""

    id: str
    title: str
    abstract: str
    authors: tuple[str, ...] = ()
    labels: frozenset[str] = frozenset()
    date: str | None = None  # "YYYY-MM"

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be nonempty")
        if not (self.title.strip() or self.abstract.strip()):
            raise CorpusError(f"document {self.id!r}: title and abstract are both empty")
        if self.date is not None and not _DATE_RE.match(self.date):
            raise CorpusError(f"document {self.id!r}: date {self.date!r} is not YYYY-MM")

    def text(self) -> str:
        return f"{self.title} {self.abstract}"


class Corpus:
    """Immutable ordered list of documents with a derived category set."""

    def __init__(self, documents):
        docs = tuple(documents)
        seen: dict[str, int] = {}
        for pos, doc in enumerate(docs):
            if doc.id in seen:
                raise CorpusError(
                    f"duplicate document id {doc.id!r} (positions {seen[doc.id]} and {pos})"
                )
            seen[doc.id] = pos
        self._documents = docs
        self._by_id = seen
        cats: set[str] = set()
        for doc in docs:
            cats.update(doc.labels)
        self._categories = frozenset(cats)

    @property
    def documents(self) -> tuple[Document, ...]:
        return self._documents

    @property
    def categories(self) -> frozenset[str]:
        return self._categories

    def __len__(self) -> int:
        return len(self._documents)

    def __iter__(self):
        return iter(self._documents)

    def __getitem__(self, i) -> Document:
        return self._documents[i]

    def get(self, doc_id: str) -> Document | None:
        pos = self._by_id.get(doc_id)
        return None if pos is None else self._documents[pos]

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def positive_count(self, category: str) -> int:
        return sum(1 for d in self._documents if category in d.labels)


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test fractions plus the shuffle seed."""

    train_fraction: float
    validation_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise CorpusError("train_fraction must be in (0, 1)")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise CorpusError("validation_fraction must be in [0, 1)")
        if self.train_fraction + self.validation_fraction > 1.0:
            raise CorpusError("train_fraction + validation_fraction must be <= 1")


def _parse_record(obj: dict, lineno: int) -> Document:
    try:
        doc_id = obj["id"]
        title = obj.get("title", "")
        abstract = obj.get("abstract", "")
        authors = obj.get("authors", [])
        labels = obj.get("labels", [])
        date = obj.get("date")
    except (TypeError, KeyError) as exc:
        raise CorpusError(f"line {lineno}: missing field {exc}") from exc
    if not isinstance(doc_id, str):
        raise CorpusError(f"line {lineno}: id must be a string")
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise CorpusError(f"line {lineno}: authors must be a list of strings")
    if not isinstance(labels, list) or not all(isinstance(c, str) for c in labels):
        raise CorpusError(f"line {lineno}: labels must be a list of strings")
    try:
        return Document(
            id=doc_id,
            title=str(title),
            abstract=str(abstract),
            authors=tuple(authors),
            labels=frozenset(labels),
            date=date if date is None else str(date),
        )
    except CorpusError as exc:
        raise CorpusError(f"line {lineno}: {exc}") from exc


def load_corpus(path) -> Corpus:
    """Read a one-JSON-object-per-line corpus file, preserving input order."""
    docs: list[Document] = []
    first_line: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno}: record must be a JSON object")
            doc = _parse_record(obj, lineno)
            if doc.id in first_line:
                raise CorpusError(
                    f"duplicate document id {doc.id!r} on lines "
                    f"{first_line[doc.id]} and {lineno}"
                )
            first_line[doc.id] = lineno
            docs.append(doc)
    return Corpus(docs)


def save_corpus(corpus: Corpus, path) -> None:
    """Inverse of load_corpus; labels written in sorted order."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            rec = {
                "id": doc.id,
                "title": doc.title,
                "abstract": doc.abstract,
                "authors": list(doc.authors),
                "labels": sorted(doc.labels),
                "date": doc.date,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def binarize_labels(corpus: Corpus, category: str) -> list[tuple[Document, int]]:
    """Binary view of one category: y=+1 iff the document carries it."""
    return [(doc, 1 if category in doc.labels else -1) for doc in corpus]


def _part_totals(n: int, spec: SplitSpec) -> list[int]:
    # Largest-remainder apportionment so part sizes sum exactly to n.
    fracs = [spec.train_fraction, spec.validation_fraction,
             1.0 - spec.train_fraction - spec.validation_fraction]
    ideal = [f * n for f in fracs]
    totals = [math.floor(x) for x in ideal]
    rem = n - sum(totals)
    order = sorted(range(3), key=lambda k: (-(ideal[k] - totals[k]), k))
    for k in order[:rem]:
        totals[k] += 1
    return totals


def _positive_allocation(pos: int, totals: list[int], n: int) -> list[int]:
    """Integer positives per part minimizing the worst rate deviation."""
    rate = pos / n
    ideal = [rate * t for t in totals]
    choices: list[list[int]] = [[]]
    for k in range(3):
        lo, hi = math.floor(ideal[k]), math.ceil(ideal[k])
        opts = sorted({max(0, min(lo, totals[k])), max(0, min(hi, totals[k]))})
        choices = [c + [o] for c in choices for o in opts]
    best = None
    best_dev = None
    for alloc in choices:
        if sum(alloc) != pos:
            continue
        if any(a > t for a, t in zip(alloc, totals)):
            continue
        dev = max(
            (abs(a / t - rate) for a, t in zip(alloc, totals) if t > 0),
            default=0.0,
        )
        if best_dev is None or dev < best_dev - 1e-15:
            best, best_dev = alloc, dev
    if best is None:
        # Rounding choices cannot hit the exact positive count; fall back to
        # largest remainder on the positives alone.
        best = [math.floor(x) for x in ideal]
        rem = pos - sum(best)
        order = sorted(range(3), key=lambda k: (-(ideal[k] - best[k]), k))
        i = 0
        while rem > 0:
            k = order[i % 3]
            if best[k] < totals[k]:
                best[k] += 1
                rem -= 1
            i += 1
    return best


def split(corpus: Corpus, spec: SplitSpec, category: str) -> tuple[Corpus, Corpus, Corpus]:
    """Partition into (train, validation, test), stratified on `category`.

    The partition is disjoint and exhaustive, part sizes follow the spec
    fractions exactly (largest-remainder rounding), and the positive rate
    of `category` in each part tracks the corpus-wide rate as closely as
    integer counts allow. Deterministic for a given seed.
    """
    if len(corpus) == 0:
        raise CorpusError("cannot split an empty corpus")
    totals = _part_totals(len(corpus), spec)
    if totals[0] == 0:
        raise CorpusError("train_fraction yields an empty train set")

    positives = [d for d in corpus if category in d.labels]
    negatives = [d for d in corpus if category not in d.labels]
    rng = random.Random(spec.seed)
    rng.shuffle(positives)
    rng.shuffle(negatives)

    pos_alloc = _positive_allocation(len(positives), totals, len(corpus))
    neg_alloc = [t - p for t, p in zip(totals, pos_alloc)]
    if any(a < 0 for a in neg_alloc):  # pathological all-positive strata
        raise CorpusError("cannot stratify: positives exceed a part size")

    parts = []
    p0 = n0 = 0
    for k in range(3):
        chunk = positives[p0:p0 + pos_alloc[k]] + negatives[n0:n0 + neg_alloc[k]]
        p0 += pos_alloc[k]
        n0 += neg_alloc[k]
        rng.shuffle(chunk)
        parts.append(Corpus(chunk))
    return parts[0], parts[1], parts[2]
