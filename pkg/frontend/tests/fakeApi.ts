// In-memory implementation of the documented /api contract, used as the
// fetch target for DOM-level end-to-end tests: version checks, the rating
// friction gate, canned suggestion payloads, report + share flow.

import {
  Assessment,
  CapabilitySummary,
  Concept,
  Session,
  Strategy,
  Taxonomy,
} from "../src/types.js";

const RISK_TYPES = [
  "surveillance", "identification", "aggregation", "phrenology-physiognomy",
  "secondary-use", "exclusion", "insecurity", "exposure", "distortion",
  "disclosure", "increased-accessibility", "intrusion",
];

export const TAXONOMY: Taxonomy = {
  version: "test",
  source_citation: "test fixture",
  risks: RISK_TYPES.map((id, index) => ({
    id,
    display_name: id.replace(/(^|-)(\w)/g, (_, sep, ch) =>
      `${sep === "-" ? " " : ""}${ch.toUpperCase()}`),
    category: index === 0 ? "data-collection"
      : index < 7 ? "data-processing"
      : index < 11 ? "data-dissemination" : "invasion",
    definition: `definition of ${id}`,
    incident_links: [{ title: `${id} incident`, url: `https://example.org/${id}` }],
  })),
};

let counter = 0;

function nextId(prefix: string): string {
  counter += 1;
  return `${prefix}${counter}`;
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function apiError(status: number, code: string, message: string,
                  details?: unknown): Response {
  return json({ error: { code, message, details } }, status);
}

export class FakeServer {
  sessions = new Map<string, Session>();
  reports = new Map<string, { report_id: string; session_id: string; markdown: string }>();
  shares = new Map<string, string>();
  putAssessmentCalls = 0;
  rankingPuts: string[][] = [];
  failNextMutationWith409 = false;

  fetcher = (input: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const url = new URL(input, "http://fake");
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    return Promise.resolve(this.route(method, url, body));
  };

  seedSession(concept: Concept): Session {
    const session = this.newSession(concept);
    this.sessions.set(session.id, session);
    return session;
  }

  private newSession(concept: Concept): Session {
    const now = new Date().toISOString();
    return {
      schema_version: "1",
      id: nextId("sess"),
      created_at: now,
      updated_at: now,
      version: 1,
      stage_hint: "scaffold",
      concept,
      use_cases: [],
      capability_summary: { text: "", pairs: [] },
      assessments: [],
      ranking: { ordered_ids: [], user_ranked: false },
      plan: { strategies: [], confidence: {} },
    };
  }

  private mutate(session: Session, sentVersion: number,
                 apply: (s: Session) => Response | null): Response {
    if (this.failNextMutationWith409) {
      this.failNextMutationWith409 = false;
      return apiError(409, "version_conflict", "stale version");
    }
    if (sentVersion !== session.version) {
      return apiError(409, "version_conflict",
        `session is at version ${session.version}, mutation based on ${sentVersion}`);
    }
    const failure = apply(session);
    if (failure) return failure;
    session.version += 1;
    session.updated_at = new Date().toISOString();
    this.syncRanking(session);
    return json(session);
  }

  private syncRanking(session: Session): void {
    const rated = session.assessments.filter((a) => a.relevancy && a.severity);
    const ratedIds = new Set(rated.map((a) => a.id));
    if (!session.ranking.user_ranked) {
      session.ranking.ordered_ids = rated.map((a) => a.id);
      return;
    }
    const kept = session.ranking.ordered_ids.filter((id) => ratedIds.has(id));
    for (const a of rated) if (!kept.includes(a.id)) kept.push(a.id);
    session.ranking.ordered_ids = kept;
  }

  private route(method: string, url: URL, body: any): Response {
    const path = url.pathname;

    if (method === "GET" && path === "/api/taxonomy") return json(TAXONOMY);

    if (method === "POST" && path === "/api/sessions") {
      if (!body?.concept?.purpose?.trim()) {
        return apiError(422, "invalid_concept", "concept purpose must not be empty");
      }
      const session = this.newSession(body.concept);
      this.sessions.set(session.id, session);
      return json(session, 201);
    }

    const shared = path.match(/^\/api\/shared\/([^/]+)$/);
    if (method === "GET" && shared) {
      const reportId = this.shares.get(shared[1]);
      const report = reportId ? this.reports.get(reportId) : undefined;
      if (!report) return apiError(404, "not_found", "unknown share token");
      return json({ report: { ...report, session_id: "" }, markdown: report.markdown });
    }

    const share = path.match(/^\/api\/reports\/([^/]+)\/share$/);
    if (method === "POST" && share) {
      if (!this.reports.has(share[1])) return apiError(404, "not_found", "no report");
      const token = `tok-${nextId("t")}-0123456789abcdef`;
      this.shares.set(token, share[1]);
      return json({ token }, 201);
    }

    const sessionMatch = path.match(/^\/api\/sessions\/([^/]+)(\/.*)?$/);
    if (!sessionMatch) return apiError(404, "not_found", "no route");
    const session = this.sessions.get(sessionMatch[1]);
    if (!session) return apiError(404, "not_found", "unknown session");
    const rest = sessionMatch[2] ?? "";

    if (method === "GET" && rest === "") return json(session);

    if (method === "PUT" && rest === "/concept") {
      return this.mutate(session, body.version, (s) => {
        if (!body.concept.purpose.trim()) {
          return apiError(422, "invalid_concept", "purpose must not be empty");
        }
        s.concept = body.concept;
        return null;
      });
    }

    const useCase = rest.match(/^\/use-cases\/([^/]+)$/);
    if (useCase && method === "PUT") {
      return this.mutate(session, body.version, (s) => {
        if (!body.use_case.description.trim()) {
          return apiError(422, "invalid_use_case", "description must not be empty");
        }
        const stored = { id: useCase[1], ...body.use_case };
        const index = s.use_cases.findIndex((u) => u.id === useCase[1]);
        if (index >= 0) s.use_cases[index] = stored;
        else s.use_cases.push(stored);
        return null;
      });
    }
    if (useCase && method === "DELETE") {
      return this.mutate(session, Number(url.searchParams.get("version")), (s) => {
        s.use_cases = s.use_cases.filter((u) => u.id !== useCase[1]);
        return null;
      });
    }

    const assessment = rest.match(/^\/assessments\/([^/]+)$/);
    if (assessment && method === "PUT") {
      this.putAssessmentCalls += 1;
      return this.mutate(session, body.version, (s) => {
        if (!RISK_TYPES.includes(body.assessment.risk_type)) {
          return apiError(422, "unknown_risk_type", "unknown risk type");
        }
        const clash = s.assessments.find((a) =>
          a.id !== assessment[1] && a.risk_type === body.assessment.risk_type);
        if (clash) return apiError(422, "duplicate_risk_type", "type already assessed");
        const stored: Assessment = { id: assessment[1], ...body.assessment };
        const index = s.assessments.findIndex((a) => a.id === assessment[1]);
        if (index >= 0) s.assessments[index] = stored;
        else s.assessments.push(stored);
        return null;
      });
    }
    if (assessment && method === "DELETE") {
      return this.mutate(session, Number(url.searchParams.get("version")), (s) => {
        s.assessments = s.assessments.filter((a) => a.id !== assessment[1]);
        s.plan.strategies = s.plan.strategies
          .map((st) => ({ ...st, addresses: st.addresses.filter((x) => x !== assessment[1]) }))
          .filter((st) => st.addresses.length > 0);
        delete s.plan.confidence[assessment[1]];
        return null;
      });
    }

    const strategy = rest.match(/^\/strategies\/([^/]+)$/);
    if (strategy && method === "PUT") {
      return this.mutate(session, body.version, (s) => {
        if (!body.strategy.text.trim() || body.strategy.addresses.length === 0) {
          return apiError(422, "invalid_strategy", "strategy needs text and addresses");
        }
        const stored: Strategy = { id: strategy[1], ...body.strategy };
        const index = s.plan.strategies.findIndex((x) => x.id === strategy[1]);
        if (index >= 0) s.plan.strategies[index] = stored;
        else s.plan.strategies.push(stored);
        return null;
      });
    }
    if (strategy && method === "DELETE") {
      return this.mutate(session, Number(url.searchParams.get("version")), (s) => {
        s.plan.strategies = s.plan.strategies.filter((x) => x.id !== strategy[1]);
        return null;
      });
    }

    if (method === "PUT" && rest === "/capability-summary") {
      return this.mutate(session, body.version, (s) => {
        s.capability_summary = body.summary as CapabilitySummary;
        return null;
      });
    }

    if (method === "PUT" && rest === "/ranking") {
      return this.mutate(session, body.version, (s) => {
        const rated = new Set(s.assessments
          .filter((a) => a.relevancy && a.severity).map((a) => a.id));
        const sent: string[] = body.ordered_ids;
        const seen = new Set<string>();
        for (const id of sent) {
          if (seen.has(id)) {
            return apiError(422, "not_a_permutation", "duplicate id", { duplicate: id });
          }
          seen.add(id);
          if (!rated.has(id)) {
            return apiError(422, "not_a_permutation", "unrated or unknown id",
              { unrated: id });
          }
        }
        for (const id of rated) {
          if (!seen.has(id)) {
            return apiError(422, "not_a_permutation", "missing id", { missing: id });
          }
        }
        this.rankingPuts.push(sent);
        s.ranking = { ordered_ids: sent, user_ranked: true };
        return null;
      });
    }

    const confidence = rest.match(/^\/confidence\/([^/]+)$/);
    if (confidence && method === "PUT") {
      return this.mutate(session, body.version, (s) => {
        const target = s.assessments.find((a) => a.id === confidence[1]);
        if (!target || !target.relevancy || !target.severity) {
          return apiError(422, "unrated_assessment", "assessment pending rating");
        }
        if (body.value < 1 || body.value > 5) {
          return apiError(422, "out_of_range", "confidence must be 1..5");
        }
        s.plan.confidence[confidence[1]] = body.value;
        return null;
      });
    }

    if (method === "POST" && rest === "/suggest/use-cases") {
      const batch = (body?.prior?.length ?? 0) > 0 ? "b" : "a";
      return json({
        snapshot_version: session.version,
        suggestions: [
          { kind: "intended", stakes: "high",
            description: `(${batch}) professional relies on the product for a critical task`,
            party: "professionals" },
          { kind: "intended", stakes: "low",
            description: `(${batch}) casual user automates a routine chore`,
            party: "casual users" },
          { kind: "unintended", stakes: "high",
            description: `(${batch}) outsider repurposes collected data to screen people`,
            party: "third parties" },
          { kind: "unintended", stakes: "low",
            description: `(${batch}) acquaintance pokes through visible activity`,
            party: "acquaintances" },
        ],
      });
    }

    if (method === "POST" && rest === "/suggest/capabilities") {
      if (session.use_cases.length === 0) {
        return apiError(422, "no_use_cases", "at least one use case is needed");
      }
      return json({
        snapshot_version: session.version,
        summary: {
          text: "The product performs the inferences its use cases describe.",
          pairs: session.use_cases.map((u) => ({
            id: nextId("p"), capability: `support: ${u.description.slice(0, 30)}`,
            requirements: [{ dimension: "collection", text: "collect the needed data" }],
            derived_from_use_cases: [u.id], origin: "ai-suggested",
          })),
        },
      });
    }

    if (method === "POST" && rest === "/suggest/risks") {
      return json({
        snapshot_version: session.version,
        suggestions: RISK_TYPES.map((riskType) => ({
          risk_type: riskType,
          manifestation: `how ${riskType} arises in this product`,
          impacted_stakeholders: "the product's users",
        })),
      });
    }

    const provocations = rest.match(/^\/suggest\/provocations\/([^/]+)$/);
    if (provocations && method === "POST") {
      const target = session.assessments.find((a) => a.id === provocations[1]);
      if (!target) return apiError(404, "not_found", "unknown assessment");
      if (!target.relevancy || !target.severity) {
        return apiError(422, "unrated_assessment", "assessment pending rating");
      }
      return json({
        snapshot_version: session.version,
        provocations: [
          { barrier: "awareness", question: "How might users see the capture?",
            seed_feature: "indicator" },
          { barrier: "motivation", question: "What makes acting worthwhile?",
            seed_feature: "defaults" },
          { barrier: "ability", question: "What controls could users be given?",
            seed_feature: "controls" },
        ],
      });
    }

    if (method === "POST" && rest === "/report") {
      const rated = session.assessments.filter((a) => a.relevancy && a.severity);
      if (rated.length === 0) {
        return apiError(422, "nothing_to_report", "no rated assessments");
      }
      const reportId = nextId("rep");
      const markdown = [
        `# Privacy Impact Assessment Report: ${session.concept.name}`,
        "## Section 1: Product Information",
        "## Section 2: Privacy Risks",
        ...session.ranking.ordered_ids.map((id, i) => `${i + 1}. ${id}`),
        "## Section 3: Mitigation Strategies",
      ].join("\n");
      const report = { report_id: reportId, session_id: session.id, markdown };
      this.reports.set(reportId, report);
      return json({ report_id: reportId, report, markdown, html: `<html>${markdown}</html>` },
        201);
    }

    return apiError(404, "not_found", `no route for ${method} ${path}`);
  }
}
