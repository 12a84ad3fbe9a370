// Risk explorer: taxonomy definitions panel, assessment editors, suggestion
// cards, and the rating modal that gates acceptance of AI-suggested risks.

import { el, option } from "../dom.js";
import { freshId, Workbench } from "../state.js";
import { Assessment, RatingLevel, RiskSuggestion } from "../types.js";

const RATINGS: RatingLevel[] = ["High", "Medium", "Low"];

function ratingSelect(name: string, current: RatingLevel | null): HTMLSelectElement {
  const select = el("select", { class: name, name },
    option("", "— not rated —", current === null));
  for (const level of RATINGS) {
    select.append(option(level, level, current === level));
  }
  return select;
}

function definitionsPanel(store: Workbench): HTMLElement {
  const taxonomy = store.taxonomy;
  if (!taxonomy) {
    return el("aside", { class: "definitions", "data-node": "risk-definition" },
      el("p", {}, "Loading taxonomy..."));
  }
  return el("aside", { class: "definitions", "data-node": "risk-definition" },
    el("h3", {}, "AI privacy risk taxonomy"),
    ...taxonomy.risks.map((risk) => el("details", { class: "definition" },
      el("summary", {},
        el("strong", {}, risk.display_name),
        el("span", { class: "chip" }, risk.category)),
      el("p", {}, risk.definition),
      risk.incident_links.length
        ? el("ul", { class: "incidents" }, ...risk.incident_links.map((link) =>
            el("li", {}, el("a", { href: link.url, target: "_blank", rel: "noopener" },
              link.title))))
        : null,
      el("button", {
        class: "add-assessment",
        "data-risk": risk.id,
        onclick: () => {
          void store.mutate((id, version) => store.api.putAssessment(id, version, {
            id: freshId("a"),
            risk_type: risk.id,
            manifestation: "",
            impacted_stakeholders: "",
            relevancy: null,
            severity: null,
            origin: "user",
          }));
        },
      }, "Assess this risk"))),
  );
}

function assessmentEditor(store: Workbench, assessment: Assessment): HTMLElement {
  const risk = store.taxonomy?.risks.find((r) => r.id === assessment.risk_type);
  const manifestation = el("textarea", { class: "field a-manifestation" });
  manifestation.value = assessment.manifestation;
  const stakeholders = el("input", { class: "field a-stakeholders" });
  stakeholders.value = assessment.impacted_stakeholders;
  const relevancy = ratingSelect("a-relevancy", assessment.relevancy);
  const severity = ratingSelect("a-severity", assessment.severity);
  const pending = !assessment.relevancy || !assessment.severity;

  return el("article", {
    class: `assessment${pending ? " pending" : ""}`,
    "data-id": assessment.id,
    "data-node": "risk-assessment",
  },
    el("header", {},
      el("strong", {}, risk ? risk.display_name : assessment.risk_type),
      pending ? el("span", { class: "chip chip-pending" }, "pending rating") : null,
      el("span", { class: "chip chip-origin" }, assessment.origin)),
    el("label", {}, "How the risk may arise", manifestation),
    el("label", {}, "Impacted stakeholders", stakeholders),
    el("div", { class: "row" },
      el("label", {}, "Relevancy", relevancy),
      el("label", {}, "Severity", severity)),
    el("div", { class: "row" },
      el("button", {
        onclick: () => {
          void store.mutate((id, version) => store.api.putAssessment(id, version, {
            ...assessment,
            manifestation: manifestation.value,
            impacted_stakeholders: stakeholders.value,
            relevancy: (relevancy.value || null) as RatingLevel | null,
            severity: (severity.value || null) as RatingLevel | null,
          }));
        },
      }, "Save"),
      el("button", {
        class: "danger",
        onclick: () => {
          void store.mutate((id, version) =>
            store.api.deleteAssessment(id, version, assessment.id));
        },
      }, "Delete")),
  );
}

function riskSuggestionCard(store: Workbench, suggestion: RiskSuggestion,
                            index: number): HTMLElement {
  const risk = store.taxonomy?.risks.find((r) => r.id === suggestion.risk_type);
  return el("article", { class: "suggestion-card risk-card", "data-risk": suggestion.risk_type },
    el("header", {}, el("strong", {}, risk ? risk.display_name : suggestion.risk_type)),
    el("p", {}, suggestion.manifestation),
    el("p", { class: "party" }, `Impacted: ${suggestion.impacted_stakeholders}`),
    el("div", { class: "row" },
      el("button", {
        class: "accept",
        onclick: () => store.beginRiskAcceptance(index),
      }, "Accept"),
      el("button", {
        class: "dismiss",
        onclick: () => {
          store.riskSuggestions = store.riskSuggestions.filter((_, i) => i !== index);
          store.setBanner(null);
        },
      }, "Dismiss")),
  );
}

/** Rating form shown before an AI-suggested risk may join the assessment list.
 *  Confirm stays disabled until both ratings are chosen. */
function ratingModal(store: Workbench): HTMLElement | null {
  const suggestion = store.ratingModal;
  if (!suggestion) return null;
  const risk = store.taxonomy?.risks.find((r) => r.id === suggestion.risk_type);
  const relevancy = el("select", { class: "modal-relevancy", name: "modal-relevancy" },
    option("", "— choose —", true), ...RATINGS.map((level) => option(level, level)));
  const severity = el("select", { class: "modal-severity", name: "modal-severity" },
    option("", "— choose —", true), ...RATINGS.map((level) => option(level, level)));
  const confirm = el("button", { class: "primary confirm-rating" },
    "Rate and add to assessment") as HTMLButtonElement;
  confirm.disabled = true;

  const refresh = () => {
    confirm.disabled = !(relevancy.value && severity.value);
  };
  relevancy.addEventListener("change", refresh);
  severity.addEventListener("change", refresh);
  confirm.addEventListener("click", () => {
    if (!relevancy.value || !severity.value) return;
    void store.confirmRiskAcceptance(relevancy.value as RatingLevel,
                                     severity.value as RatingLevel);
  });

  return el("div", { class: "modal-backdrop" },
    el("div", { class: "rating-modal", role: "dialog", "aria-modal": "true" },
      el("h3", {}, `Rate this ${risk ? risk.display_name : suggestion.risk_type} risk`),
      el("p", { class: "hint" },
        "Assess the suggestion yourself before it joins your assessment: how " +
        "relevant is it to this product, and how severe would it be?"),
      el("p", {}, suggestion.manifestation),
      el("label", {}, "Relevancy", relevancy),
      el("label", {}, "Severity", severity),
      el("div", { class: "row" },
        confirm,
        el("button", { class: "dismiss", onclick: () => store.cancelRiskAcceptance() },
          "Cancel")),
    ));
}

export function riskExplorer(store: Workbench): HTMLElement {
  const session = store.session!;
  return el("section", { class: "node node-risks", "data-node": "risk-assessment" },
    el("h2", {}, "Privacy risk explorer"),
    el("div", { class: "risk-columns" },
      el("div", { class: "assessments" },
        ...session.assessments.map((a) => assessmentEditor(store, a)),
        el("div", { class: "row" },
          el("button", {
            class: "primary",
            name: "suggest-risks",
            onclick: () => void store.fetchRiskSuggestions(),
          }, "GET SUGGESTIONS")),
        el("div", { class: "suggestions", "data-role": "risk-suggestions" },
          ...store.riskSuggestions.map((s, index) =>
            riskSuggestionCard(store, s, index)))),
      definitionsPanel(store)),
    ratingModal(store),
  );
}
