"""Held-out metrics, size curves, time trends, and config sweeps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .classifier import Bundle, predict, train_all
from .config import PipelineConfig
from .corpus import Corpus
from .errors import EvaluationError
from .textpipe import PhraseList


@dataclass(frozen=True)
class CategoryMetrics:
    """Confusion counts and derived rates for one category.

    A precision of 1.0 with no_retrievals set means the model never
    fired; callers that plot precision should treat the flag, not the
    value, as the signal. null_accuracy is the accuracy of always
    answering negative, the floor any useful model must beat.
    """

    category: str
    size: int
    tp: int
    fp: int
    fn: int
    tn: int
    no_retrievals: bool

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def precision(self) -> float:
        retrieved = self.tp + self.fp
        return self.tp / retrieved if retrieved else 1.0

    @property
    def recall(self) -> float:
        relevant = self.tp + self.fn
        return self.tp / relevant if relevant else 1.0

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    @property
    def f1(self) -> float:
        denom = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / denom if denom else 1.0

    @property
    def null_accuracy(self) -> float:
        return (self.fp + self.tn) / self.total


@dataclass(frozen=True)
class MetricsReport:
    per_category: tuple[CategoryMetrics, ...]

    def for_category(self, category: str) -> CategoryMetrics:
        for row in self.per_category:
            if row.category == category:
                return row
        raise EvaluationError(f"no metrics for category {category!r}")

    def macro_f1(self) -> float:
        if not self.per_category:
            raise EvaluationError("empty report has no macro F1")
        return sum(m.f1 for m in self.per_category) / len(self.per_category)

    def micro_accuracy(self) -> float:
        correct = sum(m.tp + m.tn for m in self.per_category)
        total = sum(m.total for m in self.per_category)
        if not total:
            raise EvaluationError("empty report has no accuracy")
        return correct / total


def evaluate(bundle: Bundle, test: Corpus) -> MetricsReport:
    """Confusion counts per bundled category over a labelled corpus.

    Positive calls come from predict(), so a calibrated category is
    judged at p >= 0.5 and an uncalibrated one at f >= 0. A document
    counts toward every category it carries.
    """
    if not len(test):
        raise EvaluationError("cannot evaluate on an empty corpus")
    names = bundle.categories()
    counts = {c: [0, 0, 0, 0] for c in names}
    for doc in test:
        wanted = predict(bundle, doc)
        called = {s.category for s in wanted.scores if s.positive}
        for c in names:
            actual = c in doc.labels
            called_c = c in called
            if actual and called_c:
                counts[c][0] += 1
            elif not actual and called_c:
                counts[c][1] += 1
            elif actual and not called_c:
                counts[c][2] += 1
            else:
                counts[c][3] += 1
    rows = []
    for c in names:
        tp, fp, fn, tn = counts[c]
        rows.append(
            CategoryMetrics(
                category=c,
                size=tp + fn,
                tp=tp,
                fp=fp,
                fn=fn,
                tn=tn,
                no_retrievals=(tp + fp == 0),
            )
        )
    return MetricsReport(per_category=tuple(rows))


@dataclass(frozen=True)
class SizeCurvePoint:
    category: str
    training_size: int
    precision: float
    recall: float
    f1: float


def size_curve(bundle: Bundle, test: Corpus) -> tuple[SizeCurvePoint, ...]:
    """Per-category quality against how much data the model was fed.

    Points come back sorted by training-set positives ascending, ready
    to plot; ties fall back to category name so the order is total.
    """
    report = evaluate(bundle, test)
    points = [
        SizeCurvePoint(
            category=m.category,
            training_size=bundle.models[m.category].n_positives,
            precision=m.precision,
            recall=m.recall,
            f1=m.f1,
        )
        for m in report.per_category
    ]
    points.sort(key=lambda p: (p.training_size, p.category))
    return tuple(points)


@dataclass(frozen=True)
class TrendBucket:
    period: str
    total: int
    positive: int
    undated: bool

    @property
    def percent(self) -> float:
        return 100.0 * self.positive / self.total if self.total else 0.0


@dataclass(frozen=True)
class TrendReport:
    category: str
    bucket: str
    buckets: tuple[TrendBucket, ...]

    def overall_percent(self) -> float:
        total = sum(b.total for b in self.buckets)
        positive = sum(b.positive for b in self.buckets)
        return 100.0 * positive / total if total else 0.0


def _period_key(date: str, bucket: str) -> str:
    return date[:4] if bucket == "year" else date


def _period_range(periods: list[str], bucket: str) -> list[str]:
    """Every period between the earliest and latest seen, inclusive."""
    if not periods:
        return []
    if bucket == "year":
        lo, hi = int(min(periods)), int(max(periods))
        return [str(y) for y in range(lo, hi + 1)]
    lo_y, lo_m = (int(p) for p in min(periods).split("-"))
    hi_y, hi_m = (int(p) for p in max(periods).split("-"))
    out = []
    y, m = lo_y, lo_m
    while (y, m) <= (hi_y, hi_m):
        out.append(f"{y:04d}-{m:02d}")
        m += 1
        if m > 12:
            y, m = y + 1, 1
    return out


def trend(bundle: Bundle, corpus: Corpus, category: str, bucket: str = "year") -> TrendReport:
    """Predicted positive share of the corpus per calendar period.

    The covered date range has no gaps: periods with no documents
    appear with zero counts. Documents without a date collect into a
    final bucket flagged undated rather than silently dropping.
    """
    if bucket not in ("year", "month"):
        raise EvaluationError(f"bucket must be year or month, got {bucket!r}")
    if category not in bundle.models:
        raise EvaluationError(f"bundle has no model for category {category!r}")
    if not len(corpus):
        raise EvaluationError("cannot compute a trend on an empty corpus")
    totals: dict[str, int] = {}
    positives: dict[str, int] = {}
    undated_total = 0
    undated_positive = 0
    for doc in corpus:
        hit = category in predict(bundle, doc).positives()
        if doc.date is None:
            undated_total += 1
            undated_positive += int(hit)
            continue
        key = _period_key(doc.date, bucket)
        totals[key] = totals.get(key, 0) + 1
        positives[key] = positives.get(key, 0) + int(hit)
    buckets = [
        TrendBucket(
            period=p,
            total=totals.get(p, 0),
            positive=positives.get(p, 0),
            undated=False,
        )
        for p in _period_range(sorted(totals), bucket)
    ]
    if undated_total:
        buckets.append(
            TrendBucket(
                period="undated",
                total=undated_total,
                positive=undated_positive,
                undated=True,
            )
        )
    return TrendReport(category=category, bucket=bucket, buckets=tuple(buckets))


@dataclass(frozen=True)
class AblationRow:
    weighting: str
    df_threshold: int
    C: float
    lexicon_size: int
    micro_accuracy: float
    macro_f1: float


def ablate(
    train: Corpus,
    test: Corpus,
    config: PipelineConfig,
    weightings: tuple[str, ...] = ("tf", "tfidf"),
    df_thresholds: tuple[int, ...] = (2, 5),
    Cs: tuple[float, ...] = (1.0,),
    stoplist: frozenset[str] | None = None,
    phrases: PhraseList = PhraseList(),
) -> tuple[AblationRow, ...]:
    """Train and score every combination in the sweep grid.

    The base config supplies everything the grid does not vary, so two
    calls with the same inputs produce identical rows, row for row.
    """
    rows = []
    for weighting, df_threshold, C in itertools.product(weightings, df_thresholds, Cs):
        cfg = replace(config, weighting=weighting, df_threshold=df_threshold, C=C)
        bundle = train_all(train, cfg, stoplist=stoplist, phrases=phrases)
        report = evaluate(bundle, test)
        rows.append(
            AblationRow(
                weighting=weighting,
                df_threshold=df_threshold,
                C=C,
                lexicon_size=len(bundle.lexicon),
                micro_accuracy=report.micro_accuracy(),
                macro_f1=report.macro_f1(),
            )
        )
    return tuple(rows)


def _csv_field(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def metrics_csv(report: MetricsReport) -> str:
    """Rows in lexicon order with a fixed header, one line per category."""
    lines = ["category,size,tp,fp,fn,tn,precision,recall,accuracy,f1"]
    for m in report.per_category:
        lines.append(
            f"{_csv_field(m.category)},{m.size},{m.tp},{m.fp},{m.fn},{m.tn},"
            f"{m.precision:.6f},{m.recall:.6f},{m.accuracy:.6f},{m.f1:.6f}"
        )
    return "\n".join(lines) + "\n"


def trend_csv(report: TrendReport) -> str:
    lines = ["period,total,positive,percent"]
    for b in report.buckets:
        lines.append(f"{_csv_field(b.period)},{b.total},{b.positive},{b.percent:.6f}")
    return "\n".join(lines) + "\n"


def ablation_csv(rows: tuple[AblationRow, ...]) -> str:
    lines = ["weighting,df_threshold,C,lexicon_size,micro_accuracy,macro_f1"]
    for r in rows:
        lines.append(
            f"{r.weighting},{r.df_threshold},{r.C!r},{r.lexicon_size},"
            f"{r.micro_accuracy:.6f},{r.macro_f1:.6f}"
        )
    return "\n".join(lines) + "\n"


def size_curve_csv(points: tuple[SizeCurvePoint, ...]) -> str:
    lines = ["category,training_size,precision,recall,f1"]
    for p in points:
        lines.append(
            f"{_csv_field(p.category)},{p.training_size},"
            f"{p.precision:.6f},{p.recall:.6f},{p.f1:.6f}"
        )
    return "\n".join(lines) + "\n"
