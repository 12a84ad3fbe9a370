// Mitigation editor: the shared strategy list (a strategy may address several
// risks), per-risk confidence, and on-demand brainstorming provocations.

import { el, option } from "../dom.js";
import { freshId, Workbench } from "../state.js";
import { Strategy } from "../types.js";

function strategyRow(store: Workbench, strategy: Strategy): HTMLElement {
  const ranked = store.rankedAssessments();
  const text = el("textarea", { class: "field s-text" });
  text.value = strategy.text;
  const boxes = ranked.map((assessment) => {
    const box = el("input", { type: "checkbox", "data-address": assessment.id });
    (box as HTMLInputElement).checked = strategy.addresses.includes(assessment.id);
    const risk = store.taxonomy?.risks.find((r) => r.id === assessment.risk_type);
    return el("label", { class: "address" }, box,
      risk ? risk.display_name : assessment.risk_type);
  });

  return el("article", { class: "strategy", "data-id": strategy.id },
    el("label", {}, "Strategy", text),
    el("fieldset", {}, el("legend", {}, "Addresses"), ...boxes),
    el("div", { class: "row" },
      el("button", {
        onclick: () => {
          const addresses = boxes
            .map((label) => label.querySelector("input") as HTMLInputElement)
            .filter((box) => box.checked)
            .map((box) => box.getAttribute("data-address")!);
          void store.mutate((id, version) => store.api.putStrategy(id, version, {
            id: strategy.id, text: text.value, addresses,
          }));
        },
      }, "Save"),
      el("button", {
        class: "danger",
        onclick: () => {
          void store.mutate((id, version) =>
            store.api.deleteStrategy(id, version, strategy.id));
        },
      }, "Delete")),
  );
}

function provocationPanel(store: Workbench, assessmentId: string): HTMLElement | null {
  const provocations = store.provocations[assessmentId];
  if (!provocations) return null;
  return el("ul", { class: "provocations", "data-for": assessmentId },
    ...provocations.map((p) => el("li", { class: `provocation barrier-${p.barrier}` },
      el("span", { class: "chip" }, p.barrier),
      el("p", {}, p.question))));
}

export function mitigationNode(store: Workbench): HTMLElement {
  const session = store.session!;
  const ranked = store.rankedAssessments();

  const perRisk = ranked.map((assessment) => {
    const risk = store.taxonomy?.risks.find((r) => r.id === assessment.risk_type);
    const confidence = el("select", { class: "confidence", "data-for": assessment.id },
      option("", "confidence…", !(assessment.id in session.plan.confidence)),
      ...[1, 2, 3, 4, 5].map((v) =>
        option(String(v), `${v}/5`, session.plan.confidence[assessment.id] === v)));
    confidence.addEventListener("change", () => {
      if (!confidence.value) return;
      void store.mutate((id, version) =>
        store.api.putConfidence(id, version, assessment.id, Number(confidence.value)));
    });
    return el("div", { class: "mitigation-risk", "data-id": assessment.id },
      el("header", {},
        el("strong", {}, risk ? risk.display_name : assessment.risk_type),
        confidence,
        el("button", {
          class: "get-provocations",
          "data-for": assessment.id,
          onclick: () => void store.fetchProvocations(assessment.id),
        }, "GET PROVOCATIONS")),
      provocationPanel(store, assessment.id));
  });

  const newText = el("textarea", { class: "field", name: "new-strategy-text" });
  const addButton = el("button", {
    name: "add-strategy",
    onclick: () => {
      const addresses = ranked.length ? [ranked[0].id] : [];
      void store.mutate((id, version) => store.api.putStrategy(id, version, {
        id: freshId("s"), text: newText.value, addresses,
      }));
    },
  }, "Add strategy");

  return el("section", { class: "node node-mitigation", "data-node": "mitigation" },
    el("h2", {}, "Mitigation plan"),
    el("p", { class: "hint" },
      "Outline the plan one risk at a time; it carries over between risks, and " +
      "one strategy may address several."),
    ...perRisk,
    ...session.plan.strategies.map((strategy) => strategyRow(store, strategy)),
    ranked.length
      ? el("div", { class: "add-strategy-form" },
          el("label", {}, "New strategy (addresses the top-ranked risk; edit after adding)",
            newText),
          addButton)
      : el("p", { class: "empty" }, "Rate and rank risks before planning mitigations."),
  );
}
