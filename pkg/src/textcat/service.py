"""HTTP facade over a trained bundle and its training corpus.

Readers never block: every request handler grabs the current bundle
reference once and works from that snapshot, so a retrain that swaps
the reference mid-flight can never mix two models in one response.
Mutations (relabel, retrain) all funnel through one lock.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .classifier import Bundle, predict, top_weights, train_all
from .corpus import Corpus, Document
from .curation import Verdict, append_verdict_log, apply_verdicts, find_outliers
from .errors import TextcatError


@dataclass
class ServiceState:
    """Shared mutable state behind the endpoints.

    bundle and corpus are replaced wholesale, never edited in place;
    handlers read each reference exactly once per request.
    """

    bundle: Bundle
    corpus: Corpus
    verdict_log: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    jobs: dict[str, dict] = field(default_factory=dict)
    job_counter: "itertools.count[int]" = field(default_factory=itertools.count)


class ClassifyRequest(BaseModel):
    title: str = ""
    abstract: str = ""
    authors: list[str] = Field(default_factory=list)


class VerdictBody(BaseModel):
    doc_id: str
    action: str
    note: str = ""


class RelabelRequest(BaseModel):
    category: str
    verdicts: list[VerdictBody]
    actor: str = "api"


class RetrainRequest(BaseModel):
    category: str


def _retrain_worker(state: ServiceState, job_id: str, category: str) -> None:
    jobs = state.jobs
    jobs[job_id]["status"] = "running"
    try:
        with state.lock:
            corpus = state.corpus
            old = state.bundle
            n_pos = corpus.positive_count(category)
            if n_pos < old.config.min_category_size:
                raise TextcatError(
                    f"category {category!r} has {n_pos} positives,"
                    f" below min_category_size={old.config.min_category_size}"
                )
            fresh = train_all(
                corpus,
                old.config,
                stoplist=old.stoplist,
                phrases=old.phrases,
                categories=[category],
            )
            if fresh.lexicon == old.lexicon:
                models = dict(old.models)
                models[category] = fresh.models[category]
                new_bundle = Bundle(
                    config=old.config,
                    n_docs=len(corpus),
                    stoplist=old.stoplist,
                    phrases=old.phrases,
                    lexicon=old.lexicon,
                    idf=old.idf,
                    models={k: models[k] for k in sorted(models)},
                )
            else:
                # label moves never change tokens, so this only fires
                # when the corpus text itself changed under us
                new_bundle = train_all(
                    corpus,
                    old.config,
                    stoplist=old.stoplist,
                    phrases=old.phrases,
                    categories=sorted(old.models),
                )
            state.bundle = new_bundle
        jobs[job_id]["status"] = "done"
    except Exception as exc:
        jobs[job_id]["status"] = "failed"
        jobs[job_id]["error"] = str(exc)


def create_app(state: ServiceState, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="textcat", docs_url=None, redoc_url=None)

    @app.exception_handler(TextcatError)
    async def _domain_error(request, exc: TextcatError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.post("/v1/classify")
    def classify(body: ClassifyRequest):
        bundle = state.bundle
        doc = Document(
            id="query",
            title=body.title,
            abstract=body.abstract,
            authors=tuple(body.authors),
        )
        prediction = predict(bundle, doc)
        return {
            "zero_vector": prediction.zero_vector,
            "results": [
                {
                    "category": s.category,
                    "f": s.score,
                    "p": s.probability,
                    "label": s.positive,
                }
                for s in prediction.scores
            ],
        }

    @app.get("/v1/categories")
    def categories():
        bundle = state.bundle
        corpus = state.corpus
        cutoff = bundle.config.min_category_size
        modeled = [
            {
                "category": name,
                "size": model.n_positives,
                "calibrated": model.calibration is not None,
                "converged": model.converged,
            }
            for name, model in bundle.models.items()
        ]
        skipped = [
            {"category": c, "size": corpus.positive_count(c)}
            for c in sorted(corpus.categories)
            if c not in bundle.models and corpus.positive_count(c) < cutoff
        ]
        return {"categories": modeled, "skipped": skipped, "n_docs": len(corpus)}

    @app.get("/v1/outliers")
    def outliers(category: str, k: int = 50):
        bundle = state.bundle
        corpus = state.corpus
        if category not in bundle.models:
            raise HTTPException(404, f"no model for category {category!r}")
        report = find_outliers(
            corpus,
            category,
            k=k,
            config=bundle.config,
            stoplist=bundle.stoplist,
            phrases=bundle.phrases,
        )
        return {
            "category": report.category,
            "C": report.C,
            "rows": [
                {
                    "rank": r.rank,
                    "doc_id": r.doc_id,
                    "alpha": r.alpha,
                    "label": r.label,
                    "f": r.score,
                    "bounded": r.bounded,
                    "title": r.title,
                }
                for r in report.rows
            ],
        }

    @app.post("/v1/relabel")
    def relabel(body: RelabelRequest):
        verdicts = [
            Verdict(doc_id=v.doc_id, action=v.action, note=v.note)
            for v in body.verdicts
        ]
        with state.lock:
            updated, summary = apply_verdicts(state.corpus, body.category, verdicts)
            state.corpus = updated
            if state.verdict_log is not None:
                append_verdict_log(state.verdict_log, verdicts, actor=body.actor)
        return {
            "category": summary.category,
            "moved_in": summary.moved_in,
            "moved_out": summary.moved_out,
            "kept": summary.kept,
            "positives_before": summary.positives_before,
            "positives_after": summary.positives_after,
            "positive_rate": summary.positive_rate,
        }

    @app.post("/v1/retrain")
    def retrain(body: RetrainRequest):
        category = body.category
        if not category:
            raise HTTPException(400, "category is required")
        job_id = f"job-{next(state.job_counter)}"
        state.jobs[job_id] = {"id": job_id, "category": category, "status": "queued", "error": None}
        thread = threading.Thread(
            target=_retrain_worker, args=(state, job_id, category), daemon=True
        )
        thread.start()
        return {"id": job_id, "category": category, "status": "queued"}

    @app.get("/v1/retrain/{job_id}")
    def retrain_status(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(404, f"no such job {job_id!r}")
        return job

    @app.get("/v1/weights")
    def weights(category: str, k: int = 20):
        bundle = state.bundle
        if category not in bundle.models:
            raise HTTPException(404, f"no model for category {category!r}")
        positive, negative = top_weights(bundle, category, k)
        return {
            "category": category,
            "positive": [{"term": t, "weight": w} for t, w in positive],
            "negative": [{"term": t, "weight": w} for t, w in negative],
        }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def build_state(
    bundle: Bundle, corpus: Corpus, verdict_log: str | None = None
) -> ServiceState:
    return ServiceState(bundle=bundle, corpus=corpus, verdict_log=verdict_log)
