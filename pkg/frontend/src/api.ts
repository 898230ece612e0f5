/**
 * Typed client for the textcat HTTP service. Field names mirror the
 * service JSON exactly; nothing here computes model quantities, it only
 * moves them.
 */

export type VerdictAction = "move_in" | "move_out" | "keep";

export type OutlierRow = {
  rank: number;
  doc_id: string;
  alpha: number;
  label: number;
  f: number;
  bounded: boolean;
  title: string;
};

export type OutlierReport = {
  category: string;
  C: number;
  rows: OutlierRow[];
};

export type CategoryInfo = {
  category: string;
  size: number;
  calibrated: boolean;
  converged: boolean;
};

export type CategoryInventory = {
  categories: CategoryInfo[];
  skipped: { category: string; size: number }[];
  n_docs: number;
};

export type Verdict = {
  doc_id: string;
  action: VerdictAction;
  note?: string;
};

export type MovementSummary = {
  category: string;
  moved_in: number;
  moved_out: number;
  kept: number;
  positives_before: number;
  positives_after: number;
  positive_rate: number;
};

export type RetrainJob = {
  id: string;
  category: string;
  status: "queued" | "running" | "done" | "failed";
  error?: string | null;
};

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = `HTTP ${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body, keep the status line
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

/** What the session needs from the service; TriageApi is the real one. */
export interface TriageBackend {
  categories(): Promise<CategoryInventory>;
  outliers(category: string, k: number): Promise<OutlierReport>;
  relabel(category: string, verdicts: Verdict[]): Promise<MovementSummary>;
  retrain(category: string): Promise<RetrainJob>;
  retrainStatus(jobId: string): Promise<RetrainJob>;
}

export class TriageApi implements TriageBackend {
  constructor(private baseUrl: string = "") {}

  categories(): Promise<CategoryInventory> {
    return request(`${this.baseUrl}/v1/categories`);
  }

  outliers(category: string, k: number): Promise<OutlierReport> {
    const q = `category=${encodeURIComponent(category)}&k=${k}`;
    return request(`${this.baseUrl}/v1/outliers?${q}`);
  }

  relabel(category: string, verdicts: Verdict[]): Promise<MovementSummary> {
    return request(`${this.baseUrl}/v1/relabel`, post({ category, verdicts }));
  }

  retrain(category: string): Promise<RetrainJob> {
    return request(`${this.baseUrl}/v1/retrain`, post({ category }));
  }

  retrainStatus(jobId: string): Promise<RetrainJob> {
    return request(`${this.baseUrl}/v1/retrain/${encodeURIComponent(jobId)}`);
  }
}
