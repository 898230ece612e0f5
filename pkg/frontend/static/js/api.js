/**
 * Typed client for the textcat HTTP service. Field names mirror the
 * service JSON exactly; nothing here computes model quantities, it only
 * moves them.
 */
export class ApiError extends Error {
    status;
    constructor(status, detail) {
        super(detail);
        this.status = status;
    }
}
async function request(url, init) {
    const response = await fetch(url, init);
    if (!response.ok) {
        let detail = `HTTP ${response.status}`;
        try {
            const body = await response.json();
            if (body && typeof body.detail === "string")
                detail = body.detail;
        }
        catch {
            // non-JSON error body, keep the status line
        }
        throw new ApiError(response.status, detail);
    }
    return response.json();
}
function post(body) {
    return {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
    };
}
export class TriageApi {
    baseUrl;
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    categories() {
        return request(`${this.baseUrl}/v1/categories`);
    }
    outliers(category, k) {
        const q = `category=${encodeURIComponent(category)}&k=${k}`;
        return request(`${this.baseUrl}/v1/outliers?${q}`);
    }
    relabel(category, verdicts) {
        return request(`${this.baseUrl}/v1/relabel`, post({ category, verdicts }));
    }
    retrain(category) {
        return request(`${this.baseUrl}/v1/retrain`, post({ category }));
    }
    retrainStatus(jobId) {
        return request(`${this.baseUrl}/v1/retrain/${encodeURIComponent(jobId)}`);
    }
}
