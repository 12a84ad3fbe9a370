// Thin typed client over the documented /api/* surface. All mutations carry
// the session version the UI mutated from; the server echoes the new session.

import {
  ApiError,
  Assessment,
  CapabilitySummary,
  Concept,
  Provocation,
  ReportPayload,
  RiskSuggestion,
  Session,
  Strategy,
  Taxonomy,
  UseCase,
  UseCaseSuggestion,
} from "./types.js";

export type Fetcher = (input: string, init?: RequestInit) => Promise<Response>;

async function parse<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let body = { code: "http_error", message: `HTTP ${response.status}` };
  try {
    const payload = await response.json();
    if (payload && payload.error) body = payload.error;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, body);
}

export class ApiClient {
  constructor(private base = "", private fetcher: Fetcher = (i, n) => fetch(i, n)) {}

  private url(path: string): string {
    return `${this.base}/api${path}`;
  }

  private get<T>(path: string): Promise<T> {
    return this.fetcher(this.url(path)).then((r) => parse<T>(r));
  }

  private send<T>(method: string, path: string, body?: unknown): Promise<T> {
    return this.fetcher(this.url(path), {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => parse<T>(r));
  }

  createSession(concept: Concept): Promise<Session> {
    return this.send("POST", "/sessions", { concept });
  }

  getSession(id: string): Promise<Session> {
    return this.get(`/sessions/${id}`);
  }

  updateConcept(id: string, version: number, concept: Concept): Promise<Session> {
    return this.send("PUT", `/sessions/${id}/concept`, { version, concept });
  }

  putUseCase(id: string, version: number, useCase: UseCase): Promise<Session> {
    const { id: ucid, ...body } = useCase;
    return this.send("PUT", `/sessions/${id}/use-cases/${ucid}`, {
      version,
      use_case: body,
    });
  }

  deleteUseCase(id: string, version: number, ucid: string): Promise<Session> {
    return this.send("DELETE", `/sessions/${id}/use-cases/${ucid}?version=${version}`);
  }

  putAssessment(id: string, version: number, assessment: Assessment): Promise<Session> {
    const { id: aid, ...body } = assessment;
    return this.send("PUT", `/sessions/${id}/assessments/${aid}`, {
      version,
      assessment: body,
    });
  }

  deleteAssessment(id: string, version: number, aid: string): Promise<Session> {
    return this.send("DELETE", `/sessions/${id}/assessments/${aid}?version=${version}`);
  }

  putStrategy(id: string, version: number, strategy: Strategy): Promise<Session> {
    const { id: sid, ...body } = strategy;
    return this.send("PUT", `/sessions/${id}/strategies/${sid}`, {
      version,
      strategy: body,
    });
  }

  deleteStrategy(id: string, version: number, sid: string): Promise<Session> {
    return this.send("DELETE", `/sessions/${id}/strategies/${sid}?version=${version}`);
  }

  putCapabilitySummary(id: string, version: number,
                       summary: CapabilitySummary): Promise<Session> {
    return this.send("PUT", `/sessions/${id}/capability-summary`, { version, summary });
  }

  putRanking(id: string, version: number, orderedIds: string[]): Promise<Session> {
    return this.send("PUT", `/sessions/${id}/ranking`, {
      version,
      ordered_ids: orderedIds,
    });
  }

  putConfidence(id: string, version: number, aid: string,
                value: number): Promise<Session> {
    return this.send("PUT", `/sessions/${id}/confidence/${aid}`, { version, value });
  }

  suggestUseCases(id: string, prior: UseCaseSuggestion[]):
      Promise<{ snapshot_version: number; suggestions: UseCaseSuggestion[] }> {
    return this.send("POST", `/sessions/${id}/suggest/use-cases`, { prior });
  }

  suggestCapabilities(id: string):
      Promise<{ snapshot_version: number; summary: CapabilitySummary }> {
    return this.send("POST", `/sessions/${id}/suggest/capabilities`);
  }

  suggestRisks(id: string):
      Promise<{ snapshot_version: number; suggestions: RiskSuggestion[] }> {
    return this.send("POST", `/sessions/${id}/suggest/risks`);
  }

  suggestProvocations(id: string, aid: string):
      Promise<{ snapshot_version: number; provocations: Provocation[] }> {
    return this.send("POST", `/sessions/${id}/suggest/provocations/${aid}`);
  }

  createReport(id: string): Promise<ReportPayload> {
    return this.send("POST", `/sessions/${id}/report`);
  }

  shareReport(reportId: string): Promise<{ token: string }> {
    return this.send("POST", `/reports/${reportId}/share`);
  }

  fetchShared(token: string): Promise<{ report: unknown; markdown: string }> {
    return this.get(`/shared/${token}`);
  }

  taxonomy(): Promise<Taxonomy> {
    return this.get("/taxonomy");
  }
}
