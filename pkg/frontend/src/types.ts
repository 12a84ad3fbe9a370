// Wire types mirroring the server's JSON documents. The UI never invents
// state: everything rendered comes from these payloads.

export type Kind = "intended" | "unintended";
export type StakesLevel = "high" | "low" | "unspecified";
export type Origin = "user" | "ai-suggested";
export type RatingLevel = "High" | "Medium" | "Low";

export interface Concept {
  name: string;
  purpose: string;
  data_description: string;
  example_use_case: string;
}

export interface UseCase {
  id: string;
  kind: Kind;
  stakes: StakesLevel;
  description: string;
  party: string;
  origin: Origin;
}

export interface Requirement {
  dimension: "collection" | "processing" | "dissemination" | "infrastructure";
  text: string;
}

export interface CapabilityPair {
  id: string;
  capability: string;
  requirements: Requirement[];
  derived_from_use_cases: string[];
  origin: Origin;
}

export interface CapabilitySummary {
  text: string;
  pairs: CapabilityPair[];
}

export interface Assessment {
  id: string;
  risk_type: string;
  manifestation: string;
  impacted_stakeholders: string;
  relevancy: RatingLevel | null;
  severity: RatingLevel | null;
  origin: Origin;
}

export interface Strategy {
  id: string;
  text: string;
  addresses: string[];
}

export interface Session {
  schema_version: string;
  id: string;
  created_at: string;
  updated_at: string;
  version: number;
  stage_hint: string;
  concept: Concept;
  use_cases: UseCase[];
  capability_summary: CapabilitySummary;
  assessments: Assessment[];
  ranking: { ordered_ids: string[]; user_ranked: boolean };
  plan: { strategies: Strategy[]; confidence: Record<string, number> };
}

export interface UseCaseSuggestion {
  kind: Kind;
  stakes: "high" | "low";
  description: string;
  party: string;
}

export interface RiskSuggestion {
  risk_type: string;
  manifestation: string;
  impacted_stakeholders: string;
}

export interface Provocation {
  barrier: "awareness" | "motivation" | "ability";
  question: string;
  seed_feature: string;
}

export interface TaxonomyRisk {
  id: string;
  display_name: string;
  category: string;
  definition: string;
  incident_links: { title: string; url: string }[];
}

export interface Taxonomy {
  version: string;
  source_citation: string;
  risks: TaxonomyRisk[];
}

export interface ReportPayload {
  report_id: string;
  report: unknown;
  markdown: string;
  html: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: unknown;
}

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message);
  }
}
