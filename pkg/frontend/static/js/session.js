/**
 * TriageSession: the operator's review loop as a finite state machine.
 *
 * Phases form exactly two cycles, reviewing -> submitting -> reviewing and
 * reviewing -> retraining -> reviewing. Every other transition throws.
 * Pending verdicts always reference displayed doc ids, hold at most one
 * action per doc, and persist locally until the service acknowledges the
 * batch.
 */
export class TransitionError extends Error {
}
function defaultStore() {
    try {
        return typeof localStorage === "undefined" ? null : localStorage;
    }
    catch {
        return null;
    }
}
const sleep = (ms) => new Promise((r) => setTimeout(r, ms));
export class TriageSession {
    category;
    api;
    store;
    listeners = [];
    phase = "reviewing";
    queue = [];
    queueStale = false;
    pending = new Map();
    history = [];
    lastRetrain = null;
    lastError = null;
    pollMs = 200;
    // Verdicts saved by a previous page load. They join `pending` only once
    // a fetched queue actually displays their doc ids.
    restored = new Map();
    constructor(api, category, store) {
        this.api = api;
        this.category = category;
        this.store = store === undefined ? defaultStore() : store;
        this.restorePending();
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    notify() {
        for (const listener of this.listeners)
            listener();
    }
    requirePhase(expected, doing) {
        if (this.phase !== expected) {
            throw new TransitionError(`cannot ${doing} while ${this.phase}`);
        }
    }
    storageKey() {
        return `textcat.pending.${this.category}`;
    }
    persistPending() {
        if (!this.store)
            return;
        const rows = [...this.pending.values(), ...this.restored.values()];
        if (rows.length === 0) {
            this.store.removeItem(this.storageKey());
        }
        else {
            this.store.setItem(this.storageKey(), JSON.stringify(rows));
        }
    }
    restorePending() {
        if (!this.store)
            return;
        const raw = this.store.getItem(this.storageKey());
        if (!raw)
            return;
        try {
            for (const row of JSON.parse(raw)) {
                if (row && typeof row.doc_id === "string") {
                    this.restored.set(row.doc_id, row);
                }
            }
        }
        catch {
            this.store.removeItem(this.storageKey());
        }
    }
    /** Fetch the ranked queue. Keeps pending verdicts on any failure. */
    async loadQueue(k) {
        this.requirePhase("reviewing", "load the queue");
        try {
            const report = await this.api.outliers(this.category, k);
            this.adoptQueue(report.rows);
            this.lastError = null;
        }
        catch (err) {
            this.lastError = err instanceof Error ? err.message : String(err);
        }
        this.notify();
    }
    adoptQueue(rows) {
        this.queue = rows;
        this.queueStale = false;
        const displayed = new Set(rows.map((r) => r.doc_id));
        // Saved verdicts become pending once their rows are on screen again;
        // verdicts for rows the queue no longer shows are dropped, the
        // operator re-judges against the current ranking.
        for (const [docId, verdict] of this.restored) {
            if (displayed.has(docId))
                this.pending.set(docId, verdict);
        }
        this.restored.clear();
        for (const docId of [...this.pending.keys()]) {
            if (!displayed.has(docId))
                this.pending.delete(docId);
        }
        this.persistPending();
    }
    /** Record one verdict; a later verdict for the same doc replaces it. */
    record(docId, action) {
        this.requirePhase("reviewing", "record a verdict");
        if (!this.queue.some((r) => r.doc_id === docId)) {
            throw new TransitionError(`doc ${docId} is not displayed`);
        }
        this.pending.set(docId, { doc_id: docId, action });
        this.persistPending();
        this.notify();
    }
    withdraw(docId) {
        this.requirePhase("reviewing", "withdraw a verdict");
        this.pending.delete(docId);
        this.persistPending();
        this.notify();
    }
    /** Send the pending batch. Clears it only on service acknowledgement. */
    async submit() {
        this.requirePhase("reviewing", "submit");
        if (this.pending.size === 0) {
            throw new TransitionError("nothing to submit");
        }
        this.phase = "submitting";
        this.notify();
        const batch = this.queue
            .filter((r) => this.pending.has(r.doc_id))
            .map((r) => this.pending.get(r.doc_id));
        try {
            const summary = await this.api.relabel(this.category, batch);
            this.history.push(summary);
            this.pending.clear();
            this.persistPending();
            this.queueStale = true; // ranking predates the moves just applied
            this.lastError = null;
            return summary;
        }
        catch (err) {
            // Atomic on the service side: nothing applied, so keep everything.
            this.lastError = err instanceof Error ? err.message : String(err);
            return null;
        }
        finally {
            this.phase = "reviewing";
            this.notify();
        }
    }
    /** Kick off a retrain, poll it to completion, refetch the queue. */
    async retrainAndRefresh(k) {
        this.requirePhase("reviewing", "retrain");
        this.phase = "retraining";
        this.notify();
        try {
            let job = await this.api.retrain(this.category);
            this.lastRetrain = job;
            this.notify();
            while (job.status === "queued" || job.status === "running") {
                await sleep(this.pollMs);
                job = await this.api.retrainStatus(job.id);
                this.lastRetrain = job;
                this.notify();
            }
            if (job.status === "done") {
                const report = await this.api.outliers(this.category, k);
                this.adoptQueue(report.rows);
                this.lastError = null;
            }
            else {
                this.queueStale = true; // labels moved but the model did not
            }
            return job;
        }
        catch (err) {
            this.lastError = err instanceof Error ? err.message : String(err);
            this.queueStale = true;
            return null;
        }
        finally {
            this.phase = "reviewing";
            this.notify();
        }
    }
}
