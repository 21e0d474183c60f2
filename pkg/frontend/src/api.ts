/** Typed fetch wrappers for the curation API. */

import type { ApiBatch, ApiBatchSummary, CurationResult, ExportedQuiz } from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
    public readonly violations: string[] = [],
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `${response.status} ${response.statusText}`;
  let violations: string[] = [];
  try {
    const body = await response.json();
    if (typeof body.error === 'string') {
      message = body.error;
    }
    if (Array.isArray(body.violations)) {
      violations = body.violations.map(String);
    }
  } catch {
    // Non-JSON error body; keep the status text.
  }
  return new ApiError(response.status, message, violations);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  listBatches(): Promise<ApiBatchSummary[]> {
    return this.get('/api/batches');
  }

  getBatch(batchId: string): Promise<ApiBatch> {
    return this.get(`/api/batches/${encodeURIComponent(batchId)}`);
  }

  async submitCuration(batchId: string, result: CurationResult): Promise<void> {
    const response = await fetch(
      `${this.baseUrl}/api/batches/${encodeURIComponent(batchId)}/curation`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(result),
      },
    );
    if (!response.ok) {
      throw await parseError(response);
    }
  }

  getExport(batchId: string): Promise<ExportedQuiz> {
    return this.get(`/api/batches/${encodeURIComponent(batchId)}/export`);
  }

  exportUrl(batchId: string): string {
    return `${this.baseUrl}/api/batches/${encodeURIComponent(batchId)}/export`;
  }
}
