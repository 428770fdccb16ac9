import type {
  ApiErrorBody,
  Catalog,
  CritiqueDiff,
  HistoryEntry,
  ScoreSummary,
  SheetDocument,
} from './types';

/** Thrown for non-2xx responses; carries the service's structured error. */
export class ApiError extends Error {
  status: number;
  code: string;
  details: Record<string, unknown>;

  constructor(status: number, body: ApiErrorBody | null) {
    super(body?.error.message ?? `request failed with status ${status}`);
    this.status = status;
    this.code = body?.error.code ?? 'unknown';
    this.details = body?.error.details ?? {};
  }

  /** Heuristic numbers the service reported as unset (finalize 422). */
  get unsetNumbers(): number[] {
    const raw = this.details['unset_numbers'];
    return Array.isArray(raw) ? raw.map(Number) : [];
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let body: ApiErrorBody | null = null;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = null;
    }
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

function jsonInit(method: string, payload: unknown): RequestInit {
  return {
    method,
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(payload),
  };
}

/** Typed client for the critique service; the UI's only data source. */
export class CdsClient {
  constructor(private baseUrl = '') {}

  getCatalog(): Promise<Catalog> {
    return request<Catalog>(`${this.baseUrl}/api/catalog`);
  }

  createDraft(artefactKey: string, appraiser: string): Promise<SheetDocument> {
    return request<SheetDocument>(
      `${this.baseUrl}/api/critiques`,
      jsonInit('POST', { artefact_key: artefactKey, appraiser }),
    );
  }

  getSheet(sheetId: string): Promise<SheetDocument> {
    return request<SheetDocument>(`${this.baseUrl}/api/critiques/${sheetId}`);
  }

  putSheet(doc: SheetDocument): Promise<SheetDocument> {
    return request<SheetDocument>(
      `${this.baseUrl}/api/critiques/${doc.sheet_id}`,
      jsonInit('PUT', doc),
    );
  }

  finalize(sheetId: string): Promise<SheetDocument> {
    return request<SheetDocument>(`${this.baseUrl}/api/critiques/${sheetId}/finalize`, {
      method: 'POST',
    });
  }

  getScore(sheetId: string): Promise<ScoreSummary> {
    return request<ScoreSummary>(`${this.baseUrl}/api/critiques/${sheetId}/score`);
  }

  history(artefactKey: string): Promise<HistoryEntry[]> {
    const params = new URLSearchParams({ artefact_key: artefactKey });
    return request<HistoryEntry[]>(`${this.baseUrl}/api/critiques?${params}`);
  }

  diff(earlierId: string, laterId: string): Promise<CritiqueDiff> {
    const params = new URLSearchParams({ from: earlierId, to: laterId });
    return request<CritiqueDiff>(`${this.baseUrl}/api/diff?${params}`);
  }
}
