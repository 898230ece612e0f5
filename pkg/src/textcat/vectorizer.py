"""Documents to unit-length sparse vectors.

Inverse document frequency is ln(n_docs / df). The base is irrelevant
after unit normalization (a global log-base change rescales every
component equally), so the natural log is fixed here once.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .corpus import Document
from .errors import DimensionMismatch, LexiconError
from .textpipe import Lexicon, PhraseList, tokenize

Weighting = Literal["tf", "tfidf"]


@dataclass(frozen=True)
class SparseVector:
    """Sorted-index sparse vector; zero components are never stored."""

    dim: int
    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray  # float64, no zeros

    def __post_init__(self) -> None:
        indices = np.asarray(self.indices, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if indices.shape != values.shape or indices.ndim != 1:
            raise DimensionMismatch("indices and values must be equal-length 1-d arrays")
        if indices.size:
            if indices[0] < 0 or indices[-1] >= self.dim:
                raise DimensionMismatch(f"index out of range for dim {self.dim}")
            if np.any(np.diff(indices) <= 0):
                raise DimensionMismatch("indices must be strictly increasing")
        indices.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def is_zero(self) -> bool:
        return self.indices.size == 0

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.indices] = self.values
        return dense

    def dot_dense(self, dense: np.ndarray) -> float:
        if dense.shape != (self.dim,):
            raise DimensionMismatch(f"expected shape ({self.dim},), got {dense.shape}")
        if self.is_zero:
            return 0.0
        return float(dense[self.indices] @ self.values)


def zero_vector(dim: int) -> SparseVector:
    return SparseVector(dim, np.empty(0, dtype=np.int64), np.empty(0))


def dot(a: SparseVector, b: SparseVector) -> float:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    if a.is_zero or b.is_zero:
        return 0.0
    _, ia, ib = np.intersect1d(a.indices, b.indices, assume_unique=True, return_indices=True)
    return float(a.values[ia] @ b.values[ib])


@dataclass(frozen=True)
class IdfTable:
    """Per-term idf weights aligned with a lexicon's term order."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DimensionMismatch("idf table must be 1-d")
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise LexiconError("idf values must be finite and nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def compute_idf(lexicon: Lexicon) -> IdfTable:
    """idf(t) = ln(n_docs / df(t)); ubiquitous terms get weight zero."""
    df = np.asarray(lexicon.df, dtype=np.float64)
    return IdfTable(np.log(lexicon.n_docs / df))


def vectorize_tokens(
    tokens: list[str],
    lexicon: Lexicon,
    idf: IdfTable | None = None,
    weighting: Weighting = "tfidf",
) -> SparseVector:
    """Term counts -> (optionally idf-weighted) unit vector.

    Out-of-lexicon tokens are ignored. A document whose surviving
    weights are all zero yields a zero vector with is_zero set; it is
    the caller's decision whether that is an error.
    """
    if weighting not in ("tf", "tfidf"):
        raise LexiconError(f"unknown weighting {weighting!r}")
    if weighting == "tfidf":
        if idf is None:
            raise LexiconError("tfidf weighting requires an idf table")
        if len(idf) != len(lexicon):
            raise DimensionMismatch(
                f"idf table has {len(idf)} entries for a {len(lexicon)}-term lexicon"
            )
    counts = Counter(tokens)
    index = lexicon.index
    pairs = sorted((index[t], c) for t, c in counts.items() if t in index)
    if not pairs:
        return zero_vector(len(lexicon))
    indices = np.fromiter((i for i, _ in pairs), dtype=np.int64, count=len(pairs))
    weights = np.fromiter((c for _, c in pairs), dtype=np.float64, count=len(pairs))
    if weighting == "tfidf":
        weights = weights * idf.values[indices]
        nonzero = weights > 0.0
        indices, weights = indices[nonzero], weights[nonzero]
    if indices.size == 0:
        return zero_vector(len(lexicon))
    norm = np.linalg.norm(weights)
    return SparseVector(len(lexicon), indices, weights / norm)


def vectorize_document(
    doc: Document,
    lexicon: Lexicon,
    phrases: PhraseList,
    stoplist: frozenset[str],
    idf: IdfTable | None = None,
    weighting: Weighting = "tfidf",
) -> SparseVector:
    return vectorize_tokens(tokenize(doc, phrases, stoplist), lexicon, idf, weighting)
