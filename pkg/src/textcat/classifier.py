"""One model per category: training, prediction, persistence.

A Bundle is the unit of deployment: lexicon, idf table, stoplist,
phrase list, and every category model travel together so that a
loaded bundle reproduces training-time tokenization exactly.
"""

from __future__ import annotations

import hashlib
import random
import zlib
from dataclasses import dataclass
from urllib.parse import quote, unquote

import numpy as np

from .calibration import fit_sigmoid, sigmoid_probability
from .config import PipelineConfig
from .corpus import Corpus, Document
from .errors import BundleFormatError, CalibrationError, DegenerateModelError
from .qp_svm import TrainingSet, extract_hyperplane, solve_dual
from .textpipe import Lexicon, PhraseList, build_lexicon, default_stoplist, tokenize
from .vectorizer import IdfTable, SparseVector, compute_idf, vectorize_tokens

FORMAT_NAME = "textcat-bundle"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class CategoryModel:
    """Hyperplane plus optional probability calibration for one label."""

    category: str
    w: np.ndarray
    b: float
    margin: float
    converged: bool
    n_support: int
    n_bounded: int
    n_positives: int
    calibration: tuple[float, float] | None

    def __post_init__(self) -> None:
        self.w.setflags(write=False)

    def score(self, vec: SparseVector) -> float:
        return vec.dot_dense(self.w) + self.b

    def probability(self, score: float) -> float | None:
        if self.calibration is None:
            return None
        a, b = self.calibration
        return float(sigmoid_probability(a, b, score))


@dataclass(frozen=True)
class CategoryScore:
    category: str
    score: float
    probability: float | None
    positive: bool


@dataclass(frozen=True)
class Prediction:
    zero_vector: bool
    scores: tuple[CategoryScore, ...]

    def positives(self) -> list[str]:
        return [s.category for s in self.scores if s.positive]


@dataclass(frozen=True)
class Bundle:
    """Everything needed to classify a document, self-contained."""

    config: PipelineConfig
    n_docs: int
    stoplist: frozenset[str]
    phrases: PhraseList
    lexicon: Lexicon
    idf: IdfTable
    models: dict[str, CategoryModel]

    def categories(self) -> list[str]:
        return list(self.models)

    def vectorize(self, doc: Document) -> SparseVector:
        tokens = tokenize(doc, self.phrases, self.stoplist)
        idf = self.idf if self.config.weighting == "tfidf" else None
        return vectorize_tokens(tokens, self.lexicon, idf, self.config.weighting)


def category_seed(seed: int, category: str) -> int:
    """Stable per-category stream so training order never matters."""
    return (seed & 0xFFFFFFFF) ^ zlib.crc32(category.encode("utf-8"))


def _plane_on(vectors, labels, config: PipelineConfig, C: float):
    ts = TrainingSet(vectors, labels)
    solution = solve_dual(
        ts, C=C, tol=config.solver_tol, backend=config.backend
    )
    plane = extract_hyperplane(ts, solution, C)
    return ts, solution, plane


def _carve_validation(indices, labels, fraction, rng):
    """Stratified calibration carve; training keeps at least one of each class."""
    pos = [t for t in indices if labels[t] == 1]
    neg = [t for t in indices if labels[t] == -1]
    rng.shuffle(pos)
    rng.shuffle(neg)
    n_pos = min(int(round(fraction * len(pos))), max(len(pos) - 1, 0))
    n_neg = min(int(round(fraction * len(neg))), max(len(neg) - 1, 0))
    val = pos[:n_pos] + neg[:n_neg]
    train = pos[n_pos:] + neg[n_neg:]
    return train, val


def _train_category(corpus, vectors, category, config: PipelineConfig) -> CategoryModel:
    labels = [1 if category in doc.labels else -1 for doc in corpus]
    usable = [t for t in range(len(labels)) if not vectors[t].is_zero]
    rng = random.Random(category_seed(config.seed, category))

    calibration = None
    if config.validation_fraction > 0.0:
        train_idx, val_idx = _carve_validation(
            usable, labels, config.validation_fraction, rng
        )
        val_labels = [labels[t] for t in val_idx]
        if 1 in val_labels and -1 in val_labels:
            try:
                _, _, carve_plane = _plane_on(
                    [vectors[t] for t in train_idx],
                    [labels[t] for t in train_idx],
                    config,
                    config.C,
                )
                scores = np.array(
                    [vectors[t].dot_dense(carve_plane.w) + carve_plane.b for t in val_idx]
                )
                fit = fit_sigmoid(scores, np.array(val_labels))
                calibration = (fit.a, fit.b)
            except (DegenerateModelError, CalibrationError):
                calibration = None

    try:
        _, solution, plane = _plane_on(
            [vectors[t] for t in usable],
            [labels[t] for t in usable],
            config,
            config.C,
        )
    except DegenerateModelError as exc:
        raise DegenerateModelError(f"category {category!r}: {exc}") from exc
    return CategoryModel(
        category=category,
        w=plane.w,
        b=plane.b,
        margin=plane.margin,
        converged=solution.converged,
        n_support=int(plane.support.size),
        n_bounded=plane.n_bounded,
        n_positives=labels.count(1),
        calibration=calibration,
    )


def train_all(
    corpus: Corpus,
    config: PipelineConfig,
    stoplist: frozenset[str] | None = None,
    phrases: PhraseList = PhraseList(),
    categories: list[str] | None = None,
) -> Bundle:
    """Train one model per sufficiently populated category.

    Categories defaults to every label carried by at least
    min_category_size documents; passing an explicit list overrides
    the cutoff (used by curation on a single category).
    """
    if stoplist is None:
        stoplist = default_stoplist()
    lexicon = build_lexicon(corpus, phrases, stoplist, config.df_threshold)
    idf = compute_idf(lexicon)
    idf_arg = idf if config.weighting == "tfidf" else None
    vectors = [
        vectorize_tokens(
            tokenize(doc, phrases, stoplist), lexicon, idf_arg, config.weighting
        )
        for doc in corpus
    ]
    if categories is None:
        categories = sorted(
            c
            for c in corpus.categories
            if corpus.positive_count(c) >= config.min_category_size
        )
        if not categories:
            raise DegenerateModelError(
                f"no category reaches min_category_size={config.min_category_size}"
            )
    else:
        categories = sorted(categories)
        missing = [c for c in categories if corpus.positive_count(c) == 0]
        if missing:
            raise DegenerateModelError(f"categories with no positives: {missing}")

    models = {c: _train_category(corpus, vectors, c, config) for c in categories}
    return Bundle(
        config=config,
        n_docs=len(corpus),
        stoplist=stoplist,
        phrases=phrases,
        lexicon=lexicon,
        idf=idf,
        models=models,
    )


def predict(bundle: Bundle, doc: Document) -> Prediction:
    """Score a document against every model in the bundle.

    The positive decision uses the calibrated 0.5 threshold when a
    category has calibration, the raw sign otherwise. Zero vectors are
    flagged, not rejected: their score is just the offset.
    """
    vec = bundle.vectorize(doc)
    scores = []
    for name, model in bundle.models.items():
        f = model.score(vec)
        p = model.probability(f)
        positive = (p >= 0.5) if p is not None else (f >= 0.0)
        scores.append(
            CategoryScore(category=name, score=f, probability=p, positive=bool(positive))
        )
    return Prediction(zero_vector=vec.is_zero, scores=tuple(scores))


def top_weights(
    bundle: Bundle, category: str, k: int = 20
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """Heaviest positive and negative lexicon terms for one category."""
    model = bundle.models.get(category)
    if model is None:
        raise BundleFormatError(f"bundle has no model for category {category!r}")
    nonzero = np.flatnonzero(model.w)
    ranked = nonzero[np.argsort(model.w[nonzero])]
    terms = bundle.lexicon.terms
    negative = [(terms[i], float(model.w[i])) for i in ranked[:k] if model.w[i] < 0.0]
    positive = [
        (terms[i], float(model.w[i])) for i in ranked[::-1][:k] if model.w[i] > 0.0
    ]
    return positive, negative


def _fmt(x: float) -> str:
    return repr(float(x))


def save_bundle(bundle: Bundle, path: str) -> None:
    """Plain-text bundle with a checksum; floats round-trip exactly."""
    lines: list[str] = []
    cfg = bundle.config
    lines.append(
        "config"
        f" df_threshold {cfg.df_threshold}"
        f" weighting {cfg.weighting}"
        f" C {_fmt(cfg.C)}"
        f" clean_C {_fmt(cfg.clean_C)}"
        f" min_category_size {cfg.min_category_size}"
        f" validation_fraction {_fmt(cfg.validation_fraction)}"
        f" solver_tol {_fmt(cfg.solver_tol)}"
        f" seed {cfg.seed}"
    )
    lines.append(f"n_docs {bundle.n_docs}")
    stopwords = sorted(bundle.stoplist)
    lines.append(f"stopwords {len(stopwords)}")
    lines.extend(quote(w, safe="") for w in stopwords)
    pairs = sorted(bundle.phrases.pairs)
    lines.append(f"phrases {len(pairs)}")
    lines.extend(f"{quote(a, safe='')} {quote(b, safe='')}" for a, b in pairs)
    lex = bundle.lexicon
    lines.append(f"lexicon {len(lex)} {lex.n_docs} {lex.df_threshold}")
    lines.extend(
        f"{quote(t, safe='')} {d}" for t, d in zip(lex.terms, lex.df)
    )
    lines.append(f"idf {len(bundle.idf)}")
    lines.extend(_fmt(v) for v in bundle.idf.values)
    lines.append(f"models {len(bundle.models)}")
    for name, model in bundle.models.items():
        cal = (
            f"{_fmt(model.calibration[0])},{_fmt(model.calibration[1])}"
            if model.calibration is not None
            else "none"
        )
        lines.append(
            f"model {quote(name, safe='')}"
            f" b {_fmt(model.b)}"
            f" margin {_fmt(model.margin)}"
            f" converged {int(model.converged)}"
            f" n_support {model.n_support}"
            f" n_bounded {model.n_bounded}"
            f" n_positives {model.n_positives}"
            f" calibration {cal}"
        )
        nonzero = np.flatnonzero(model.w)
        entries = " ".join(f"{i}:{_fmt(model.w[i])}" for i in nonzero)
        lines.append(f"weights {nonzero.size} {entries}".rstrip())
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{FORMAT_NAME} {FORMAT_VERSION}\n")
        handle.write(f"sha256 {digest}\n")
        handle.write(body)


class _Reader:
    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def next(self, expect: str | None = None) -> str:
        if self.pos >= len(self.lines):
            raise BundleFormatError("bundle truncated")
        line = self.lines[self.pos]
        self.pos += 1
        if expect is not None and not line.startswith(expect + " "):
            raise BundleFormatError(
                f"line {self.pos + 2}: expected {expect!r}, got {line[:40]!r}"
            )
        return line


def _parse_kv(parts: list[str], start: int) -> dict[str, str]:
    if (len(parts) - start) % 2 != 0:
        raise BundleFormatError(f"odd key/value list in {' '.join(parts[:2])!r}")
    return {parts[i]: parts[i + 1] for i in range(start, len(parts), 2)}


def load_bundle(path: str) -> Bundle:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if header != [FORMAT_NAME, str(FORMAT_VERSION)]:
            raise BundleFormatError(f"{path}: not a {FORMAT_NAME} v{FORMAT_VERSION} file")
        checksum_line = handle.readline().split()
        if len(checksum_line) != 2 or checksum_line[0] != "sha256":
            raise BundleFormatError(f"{path}: missing checksum line")
        body = handle.read()
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if digest != checksum_line[1]:
        raise BundleFormatError(f"{path}: checksum mismatch, file corrupted")

    reader = _Reader(body.splitlines())
    try:
        cfg_parts = reader.next("config").split()
        kv = _parse_kv(cfg_parts, 1)
        config = PipelineConfig(
            df_threshold=int(kv["df_threshold"]),
            weighting=kv["weighting"],
            C=float(kv["C"]),
            clean_C=float(kv["clean_C"]),
            min_category_size=int(kv["min_category_size"]),
            validation_fraction=float(kv["validation_fraction"]),
            solver_tol=float(kv["solver_tol"]),
            seed=int(kv["seed"]),
        )
        n_docs = int(reader.next("n_docs").split()[1])
        n_stop = int(reader.next("stopwords").split()[1])
        stoplist = frozenset(unquote(reader.next()) for _ in range(n_stop))
        n_phrases = int(reader.next("phrases").split()[1])
        pairs = set()
        for _ in range(n_phrases):
            a, b = reader.next().split()
            pairs.add((unquote(a), unquote(b)))
        phrases = PhraseList(frozenset(pairs))
        lex_parts = reader.next("lexicon").split()
        n_terms, lex_docs, lex_threshold = (
            int(lex_parts[1]),
            int(lex_parts[2]),
            int(lex_parts[3]),
        )
        terms = []
        dfs = []
        for _ in range(n_terms):
            t, d = reader.next().split()
            terms.append(unquote(t))
            dfs.append(int(d))
        lexicon = Lexicon(
            terms=tuple(terms),
            df=tuple(dfs),
            n_docs=lex_docs,
            df_threshold=lex_threshold,
        )
        n_idf = int(reader.next("idf").split()[1])
        if n_idf != n_terms:
            raise BundleFormatError("idf table size disagrees with lexicon")
        idf = IdfTable(np.array([float(reader.next()) for _ in range(n_idf)]))
        n_models = int(reader.next("models").split()[1])
        models: dict[str, CategoryModel] = {}
        for _ in range(n_models):
            parts = reader.next("model").split()
            name = unquote(parts[1])
            kv = _parse_kv(parts, 2)
            if kv["calibration"] == "none":
                calibration = None
            else:
                cal_a, cal_b = kv["calibration"].split(",")
                calibration = (float(cal_a), float(cal_b))
            weight_parts = reader.next("weights").split()
            nnz = int(weight_parts[1])
            if len(weight_parts) != nnz + 2:
                raise BundleFormatError(f"model {name!r}: weight count mismatch")
            w = np.zeros(n_terms)
            for entry in weight_parts[2:]:
                idx, val = entry.split(":")
                w[int(idx)] = float(val)
            models[name] = CategoryModel(
                category=name,
                w=w,
                b=float(kv["b"]),
                margin=float(kv["margin"]),
                converged=bool(int(kv["converged"])),
                n_support=int(kv["n_support"]),
                n_bounded=int(kv["n_bounded"]),
                n_positives=int(kv["n_positives"]),
                calibration=calibration,
            )
    except (KeyError, ValueError, IndexError) as exc:
        raise BundleFormatError(f"{path}: malformed bundle: {exc}") from exc
    return Bundle(
        config=config,
        n_docs=n_docs,
        stoplist=stoplist,
        phrases=phrases,
        lexicon=lexicon,
        idf=idf,
        models=models,
    )
