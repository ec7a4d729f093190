// Typed client for the annotation service. The UI never computes or
// mutates coverage; everything it knows arrives through these four calls.

export interface TaskPayload {
  task_id: string;
  context: string[];
  highlight: [number, number];
  sequence_no: number;
}

export interface RecordPayload {
  task_id: string;
  trigger: string[];
  translation: string[];
  elapsed_seconds: number;
  worker_id: string;
  dollars: string;
}

export interface StatusPayload {
  triggers: { total: number; covered: number; pending: number; remaining: number };
  stopping_met: boolean;
  records: number;
  totals: { sentences: number; words: number; seconds: number; dollars: string };
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** A non-2xx response the UI knows how to explain (404/409/422). */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    if (body && typeof body.detail === 'string') return body.detail;
  } catch {
    // non-JSON error body; fall through
  }
  return response.statusText || `status ${response.status}`;
}

export class AnnotationApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** Next task for this worker, or null when the service has no work (204). */
  async nextTask(worker: string): Promise<TaskPayload | null> {
    const url = `${this.baseUrl}/task?worker=${encodeURIComponent(worker)}`;
    const response = await this.fetchFn(url);
    if (response.status === 204) return null;
    if (!response.ok) throw new ApiError(response.status, await errorDetail(response));
    return (await response.json()) as TaskPayload;
  }

  /** Submit a translation; throws ApiError on 404/409/422. */
  async submit(taskId: string, worker: string, translation: string): Promise<RecordPayload> {
    const response = await this.fetchFn(`${this.baseUrl}/task/${encodeURIComponent(taskId)}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ worker, translation }),
    });
    if (!response.ok) throw new ApiError(response.status, await errorDetail(response));
    return (await response.json()) as RecordPayload;
  }

  async status(): Promise<StatusPayload> {
    const response = await this.fetchFn(`${this.baseUrl}/status`);
    if (!response.ok) throw new ApiError(response.status, await errorDetail(response));
    return (await response.json()) as StatusPayload;
  }
}
