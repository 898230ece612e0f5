"""Label-cleaning workflow: outlier ranking, verdicts, audit trail.

The loop: train a deliberately hard-margin model on the suspect
category, surface the documents the optimizer fought hardest over
(largest dual coefficients), collect human verdicts, apply them, and
retrain. Each pass drives the residual outlier mass down.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from .config import PipelineConfig
from .corpus import Corpus
from .errors import CurationError
from .qp_svm import TrainingSet, extract_hyperplane, solve_dual
from .textpipe import (
    PhraseList,
    build_lexicon,
    default_stoplist,
    tokenize,
)
from .vectorizer import compute_idf, vectorize_tokens

_ACTIONS = ("move_in", "move_out", "keep")


@dataclass(frozen=True)
class OutlierRow:
    """One suspect document: rank is 1-based, alpha carries its sign
    convention from the dual (always nonnegative), bounded means the
    coefficient sits at the box limit so its true badness is censored."""

    rank: int
    doc_id: str
    alpha: float
    label: bool
    score: float
    bounded: bool
    title: str


@dataclass(frozen=True)
class OutlierReport:
    category: str
    C: float
    rows: tuple[OutlierRow, ...]

    def doc_ids(self) -> list[str]:
        return [r.doc_id for r in self.rows]

    def max_alpha(self) -> float:
        return max((r.alpha for r in self.rows), default=0.0)

    def alpha_mass(self) -> float:
        return float(sum(r.alpha for r in self.rows))


def find_outliers(
    corpus: Corpus,
    category: str,
    k: int = 50,
    C: float | None = None,
    config: PipelineConfig = PipelineConfig(),
    stoplist: frozenset[str] | None = None,
    phrases: PhraseList = PhraseList(),
) -> OutlierReport:
    """Rank the k documents with the largest dual coefficients.

    Trains a dedicated uncalibrated model for the category at the
    cleaning bound (config.clean_C unless C overrides it); a harder
    bound makes mislabeled documents stand out instead of being
    absorbed by slack. Ties in alpha break by corpus position so the
    ranking is reproducible run to run.
    """
    if k < 0:
        raise CurationError("k must be nonnegative")
    n_pos = corpus.positive_count(category)
    if n_pos < config.min_category_size:
        raise CurationError(
            f"category {category!r} has {n_pos} positives,"
            f" below min_category_size={config.min_category_size}"
        )
    clean_C = config.clean_C if C is None else C
    if not clean_C > 0:
        raise CurationError("C must be positive")
    if k == 0:
        return OutlierReport(category=category, C=clean_C, rows=())

    if stoplist is None:
        stoplist = default_stoplist()
    lexicon = build_lexicon(corpus, phrases, stoplist, config.df_threshold)
    idf = compute_idf(lexicon) if config.weighting == "tfidf" else None
    vectors = [
        vectorize_tokens(
            tokenize(doc, phrases, stoplist), lexicon, idf, config.weighting
        )
        for doc in corpus
    ]
    usable = [t for t in range(len(corpus)) if not vectors[t].is_zero]
    labels = np.array(
        [1.0 if category in corpus[t].labels else -1.0 for t in usable]
    )
    ts = TrainingSet([vectors[t] for t in usable], labels)
    solution = solve_dual(ts, C=clean_C, tol=config.solver_tol, backend=config.backend)
    plane = extract_hyperplane(ts, solution, clean_C)
    alpha = solution.alpha

    order = np.argsort(-alpha, kind="stable")[: min(k, alpha.size)]
    rows = []
    for rank, pos in enumerate(order, start=1):
        doc = corpus[usable[pos]]
        vec = vectors[usable[pos]]
        rows.append(
            OutlierRow(
                rank=rank,
                doc_id=doc.id,
                alpha=float(alpha[pos]),
                label=category in doc.labels,
                score=float(vec.dot_dense(plane.w) + plane.b),
                bounded=bool(alpha[pos] >= clean_C),
                title=doc.title,
            )
        )
    return OutlierReport(category=category, C=clean_C, rows=tuple(rows))


@dataclass(frozen=True)
class Verdict:
    """One reviewer decision about one document's membership."""

    doc_id: str
    action: str
    note: str = ""

    def __post_init__(self) -> None:
        if self.action not in _ACTIONS:
            raise CurationError(
                f"verdict action must be one of {_ACTIONS}, got {self.action!r}"
            )
        if not self.doc_id:
            raise CurationError("verdict needs a doc_id")


@dataclass(frozen=True)
class MovementSummary:
    category: str
    moved_in: int
    moved_out: int
    kept: int
    positives_before: int
    positives_after: int
    corpus_size: int

    @property
    def positive_rate(self) -> float:
        return self.positives_after / self.corpus_size


def apply_verdicts(
    corpus: Corpus, category: str, verdicts: list[Verdict]
) -> tuple[Corpus, MovementSummary]:
    """New corpus with the verdicts applied, plus the movement tally.

    Applying the same batch twice changes nothing the second time: a
    move_in on a document already in the category is a no-op and is
    counted as kept, likewise move_out on a non-member. Two verdicts
    for one document must agree or the whole batch is rejected; no
    partial application ever happens.
    """
    actions: dict[str, str] = {}
    for v in verdicts:
        prior = actions.get(v.doc_id)
        if prior is not None and prior != v.action:
            raise CurationError(
                f"contradictory verdicts for {v.doc_id!r}: {prior} vs {v.action}"
            )
        actions[v.doc_id] = v.action
    known = {doc.id for doc in corpus}
    for doc_id in actions:
        if doc_id not in known:
            raise CurationError(f"verdict for unknown document {doc_id!r}")

    before = corpus.positive_count(category)
    moved_in = moved_out = kept = 0
    docs = []
    for doc in corpus:
        action = actions.get(doc.id)
        if action is None:
            docs.append(doc)
            continue
        member = category in doc.labels
        if action == "move_in" and not member:
            docs.append(replace(doc, labels=doc.labels | {category}))
            moved_in += 1
        elif action == "move_out" and member:
            docs.append(replace(doc, labels=doc.labels - {category}))
            moved_out += 1
        else:
            docs.append(doc)
            kept += 1
    updated = Corpus(tuple(docs))
    summary = MovementSummary(
        category=category,
        moved_in=moved_in,
        moved_out=moved_out,
        kept=kept,
        positives_before=before,
        positives_after=updated.positive_count(category),
        corpus_size=len(updated),
    )
    return updated, summary


@dataclass(frozen=True)
class CleanLoopStatus:
    category: str
    rounds: int
    total_moved_in: int
    total_moved_out: int
    positives: int
    positive_rate: float
    outlier_mass: float


def clean_loop_status(
    corpus: Corpus,
    category: str,
    history: list[MovementSummary],
    k: int = 50,
    config: PipelineConfig = PipelineConfig(),
    stoplist: frozenset[str] | None = None,
    phrases: PhraseList = PhraseList(),
) -> CleanLoopStatus:
    """Where the cleaning loop stands after the applied batches.

    outlier_mass is the summed alpha of the current top-k ranking; a
    loop that is working pushes it down round over round.
    """
    for s in history:
        if s.category != category:
            raise CurationError(
                f"history mixes categories: {s.category!r} vs {category!r}"
            )
    report = find_outliers(
        corpus, category, k=k, config=config, stoplist=stoplist, phrases=phrases
    )
    return CleanLoopStatus(
        category=category,
        rounds=len(history),
        total_moved_in=sum(s.moved_in for s in history),
        total_moved_out=sum(s.moved_out for s in history),
        positives=corpus.positive_count(category),
        positive_rate=corpus.positive_count(category) / len(corpus),
        outlier_mass=report.alpha_mass(),
    )


def append_verdict_log(path: str, verdicts: list[Verdict], actor: str) -> None:
    """Append one JSON object per verdict to the audit log.

    The log is append-only history, never replayed by the tooling;
    timestamps are UTC so merged logs from several machines sort.
    """
    stamp = datetime.now(timezone.utc).isoformat()
    with open(path, "a", encoding="utf-8") as handle:
        for v in verdicts:
            handle.write(
                json.dumps(
                    {
                        "doc_id": v.doc_id,
                        "action": v.action,
                        "note": v.note,
                        "timestamp": stamp,
                        "actor": actor,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def read_verdict_log(path: str) -> list[dict]:
    entries = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CurationError(f"{path}:{lineno}: bad log line: {exc}") from exc
            missing = {"doc_id", "action", "note", "timestamp", "actor"} - set(row)
            if missing:
                raise CurationError(f"{path}:{lineno}: missing fields {sorted(missing)}")
            entries.append(row)
    return entries


def outlier_csv(report: OutlierReport) -> str:
    lines = ["rank,doc_id,alpha,label,f,title"]
    for r in report.rows:
        title = r.title.replace('"', '""')
        lines.append(
            f"{r.rank},{_csv_field(r.doc_id)},{r.alpha!r},{int(r.label)},"
            f"{r.score!r},\"{title}\""
        )
    return "\n".join(lines) + "\n"


def _csv_field(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value
