// Central workbench state. The session object is always the server's latest
// echo; optimistic edits are never kept locally. A failed mutation (409/422)
// reloads the server state and surfaces a banner, so the view rolls back.
//
// Transient UI state (pending suggestion cards, the rating modal, fetched
// provocations, the report view) lives here too, so full re-renders are safe.

import { ApiClient } from "./api.js";
import {
  ApiError,
  Assessment,
  CapabilitySummary,
  Provocation,
  RatingLevel,
  ReportPayload,
  RiskSuggestion,
  Session,
  Taxonomy,
  UseCaseSuggestion,
} from "./types.js";

export type Listener = () => void;

export interface Banner {
  tone: "error" | "info";
  text: string;
}

export function freshId(prefix: string): string {
  const random = Math.random().toString(36).slice(2, 10);
  return `${prefix}-${Date.now().toString(36)}-${random}`;
}

export class Workbench {
  session: Session | null = null;
  taxonomy: Taxonomy | null = null;
  banner: Banner | null = null;

  // transient, view-facing state
  useCaseSuggestions: UseCaseSuggestion[] = [];
  seenUseCaseSuggestions: UseCaseSuggestion[] = [];
  riskSuggestions: RiskSuggestion[] = [];
  capabilityProposal: CapabilitySummary | null = null;
  ratingModal: RiskSuggestion | null = null;
  provocations: Record<string, Provocation[]> = {};
  reportView: ReportPayload | null = null;
  shareToken: string | null = null;
  busy = false;

  private listeners: Listener[] = [];

  constructor(public api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  setBanner(banner: Banner | null): void {
    this.banner = banner;
    this.emit();
  }

  async loadTaxonomy(): Promise<void> {
    this.taxonomy = await this.api.taxonomy();
    this.emit();
  }

  async openSession(id: string): Promise<void> {
    this.session = await this.api.getSession(id);
    this.emit();
  }

  adopt(session: Session): void {
    this.session = session;
    this.banner = null;
    this.emit();
  }

  get id(): string {
    if (!this.session) throw new Error("no session open");
    return this.session.id;
  }

  /** Run a mutation against the current version; roll back to server state on
   *  conflict or rejection. Returns true when the mutation stuck. */
  async mutate(run: (id: string, version: number) => Promise<Session>):
      Promise<boolean> {
    if (!this.session) return false;
    try {
      this.adopt(await run(this.session.id, this.session.version));
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        if (error.status === 409) {
          await this.openSession(this.session.id);
          this.setBanner({
            tone: "error",
            text: "This session changed elsewhere; it has been reloaded — please retry.",
          });
          return false;
        }
        await this.openSession(this.session.id);
        this.setBanner({ tone: "error", text: error.body.message });
        return false;
      }
      this.setBanner({ tone: "error", text: String(error) });
      return false;
    }
  }

  private async run<T>(task: () => Promise<T>): Promise<T | null> {
    this.busy = true;
    this.emit();
    try {
      return await task();
    } catch (error) {
      const text = error instanceof ApiError ? error.body.message : String(error);
      this.banner = { tone: "error", text };
      return null;
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  // -- suggestion flows -------------------------------------------------------

  async fetchUseCaseSuggestions(): Promise<void> {
    await this.run(async () => {
      const reply = await this.api.suggestUseCases(this.id, this.seenUseCaseSuggestions);
      this.useCaseSuggestions = reply.suggestions;
      this.seenUseCaseSuggestions =
        this.seenUseCaseSuggestions.concat(reply.suggestions);
    });
  }

  async acceptUseCaseSuggestion(index: number): Promise<void> {
    const suggestion = this.useCaseSuggestions[index];
    if (!suggestion || !this.session) return;
    const accepted = await this.mutate((id, version) =>
      this.api.putUseCase(id, version, {
        id: freshId("uc"),
        kind: suggestion.kind,
        stakes: suggestion.stakes,
        description: suggestion.description,
        party: suggestion.party,
        origin: "ai-suggested",
      }));
    if (accepted) {
      this.useCaseSuggestions = this.useCaseSuggestions.filter((_, i) => i !== index);
      this.emit();
    }
  }

  dismissUseCaseSuggestion(index: number): void {
    this.useCaseSuggestions = this.useCaseSuggestions.filter((_, i) => i !== index);
    this.emit();
  }

  async fetchCapabilityProposal(): Promise<void> {
    await this.run(async () => {
      const reply = await this.api.suggestCapabilities(this.id);
      this.capabilityProposal = reply.summary;
    });
  }

  async acceptCapabilityProposal(): Promise<void> {
    const proposal = this.capabilityProposal;
    if (!proposal) return;
    const accepted = await this.mutate((id, version) =>
      this.api.putCapabilitySummary(id, version, proposal));
    if (accepted) {
      this.capabilityProposal = null;
      this.emit();
    }
  }

  async fetchRiskSuggestions(): Promise<void> {
    await this.run(async () => {
      const reply = await this.api.suggestRisks(this.id);
      const taken = new Set(this.session?.assessments.map((a) => a.risk_type));
      this.riskSuggestions = reply.suggestions.filter((s) => !taken.has(s.risk_type));
    });
  }

  /** Accepting an AI-suggested risk must pass through the rating modal. */
  beginRiskAcceptance(index: number): void {
    this.ratingModal = this.riskSuggestions[index] ?? null;
    this.emit();
  }

  cancelRiskAcceptance(): void {
    this.ratingModal = null;
    this.emit();
  }

  async confirmRiskAcceptance(relevancy: RatingLevel,
                              severity: RatingLevel): Promise<void> {
    const suggestion = this.ratingModal;
    if (!suggestion) return;
    const accepted = await this.mutate((id, version) =>
      this.api.putAssessment(id, version, {
        id: freshId("a"),
        risk_type: suggestion.risk_type,
        manifestation: suggestion.manifestation,
        impacted_stakeholders: suggestion.impacted_stakeholders,
        relevancy,
        severity,
        origin: "ai-suggested",
      }));
    if (accepted) {
      this.riskSuggestions =
        this.riskSuggestions.filter((s) => s.risk_type !== suggestion.risk_type);
      this.ratingModal = null;
      this.emit();
    }
  }

  async fetchProvocations(assessmentId: string): Promise<void> {
    await this.run(async () => {
      const reply = await this.api.suggestProvocations(this.id, assessmentId);
      this.provocations = { ...this.provocations, [assessmentId]: reply.provocations };
    });
  }

  // -- report -----------------------------------------------------------------

  async generateReport(): Promise<void> {
    await this.run(async () => {
      this.reportView = await this.api.createReport(this.id);
      this.shareToken = null;
    });
  }

  async shareReport(): Promise<void> {
    const view = this.reportView;
    if (!view) return;
    await this.run(async () => {
      const reply = await this.api.shareReport(view.report_id);
      this.shareToken = reply.token;
    });
  }

  // -- derived views ------------------------------------------------------------

  rankedAssessments(): Assessment[] {
    const session = this.session;
    if (!session) return [];
    const byId = new Map(session.assessments.map((a) => [a.id, a]));
    return session.ranking.ordered_ids
      .map((id) => byId.get(id))
      .filter((a): a is Assessment => a !== undefined);
  }

  pendingAssessments(): Assessment[] {
    const session = this.session;
    if (!session) return [];
    return session.assessments.filter((a) => !a.relevancy || !a.severity);
  }
}
