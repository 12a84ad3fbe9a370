// Use-case node: the brainstormed intended/unintended uses, plus the
// GET SUGGESTIONS flow that renders four kind x stakes cards per batch.

import { el, option } from "../dom.js";
import { freshId, Workbench } from "../state.js";
import { Kind, StakesLevel, UseCase } from "../types.js";

function useCaseRow(store: Workbench, useCase: UseCase): HTMLElement {
  const description = el("textarea", { class: "field uc-description" });
  description.value = useCase.description;
  const party = el("input", { class: "field uc-party" });
  party.value = useCase.party;
  const kind = el("select", { class: "uc-kind" },
    option("intended", "intended", useCase.kind === "intended"),
    option("unintended", "unintended", useCase.kind === "unintended"));
  const stakes = el("select", { class: "uc-stakes" },
    option("high", "high stakes", useCase.stakes === "high"),
    option("low", "low stakes", useCase.stakes === "low"),
    option("unspecified", "unspecified", useCase.stakes === "unspecified"));

  return el("article", { class: "use-case", "data-id": useCase.id },
    el("header", {},
      el("span", { class: `chip chip-${useCase.kind}` }, useCase.kind),
      el("span", { class: "chip" }, `${useCase.stakes} stakes`),
      el("span", { class: "chip chip-origin" }, useCase.origin)),
    el("label", {}, "Description", description),
    el("label", {}, useCase.kind === "intended" ? "Beneficiary" : "Exploiter", party),
    el("div", { class: "row" }, kind, stakes,
      el("button", {
        onclick: () => {
          void store.mutate((id, version) => store.api.putUseCase(id, version, {
            ...useCase,
            description: description.value,
            party: party.value,
            kind: kind.value as Kind,
            stakes: stakes.value as StakesLevel,
          }));
        },
      }, "Save"),
      el("button", {
        class: "danger",
        onclick: () => {
          void store.mutate((id, version) =>
            store.api.deleteUseCase(id, version, useCase.id));
        },
      }, "Delete")),
  );
}

function suggestionCard(store: Workbench, index: number): HTMLElement {
  const suggestion = store.useCaseSuggestions[index];
  return el("article", { class: "suggestion-card use-case-card" },
    el("header", {},
      el("span", { class: `chip chip-${suggestion.kind}` }, suggestion.kind),
      el("span", { class: "chip" }, `${suggestion.stakes} stakes`)),
    el("p", {}, suggestion.description),
    el("p", { class: "party" },
      `${suggestion.kind === "intended" ? "Beneficiary" : "Exploiter"}: ${suggestion.party}`),
    el("div", { class: "row" },
      el("button", {
        class: "accept",
        onclick: () => void store.acceptUseCaseSuggestion(index),
      }, "Accept"),
      el("button", {
        class: "dismiss",
        onclick: () => store.dismissUseCaseSuggestion(index),
      }, "Dismiss")),
  );
}

export function useCaseNode(store: Workbench): HTMLElement {
  const session = store.session!;
  const addForm = () => {
    const description = el("textarea", { class: "field", name: "new-uc-description" });
    const party = el("input", { class: "field", name: "new-uc-party" });
    const kind = el("select", { name: "new-uc-kind" },
      option("intended", "intended", true), option("unintended", "unintended"));
    const stakes = el("select", { name: "new-uc-stakes" },
      option("unspecified", "unspecified", true),
      option("high", "high stakes"), option("low", "low stakes"));
    return el("details", { class: "add-form" },
      el("summary", {}, "Add a use case"),
      el("label", {}, "Description", description),
      el("label", {}, "Beneficiary / exploiter", party),
      el("div", { class: "row" }, kind, stakes,
        el("button", {
          name: "add-use-case",
          onclick: () => {
            void store.mutate((id, version) => store.api.putUseCase(id, version, {
              id: freshId("uc"),
              kind: kind.value as Kind,
              stakes: stakes.value as StakesLevel,
              description: description.value,
              party: party.value,
              origin: "user",
            }));
          },
        }, "Add")),
    );
  };

  return el("section", { class: "node node-use-cases", "data-node": "use-case" },
    el("h2", {}, "Use cases"),
    el("p", { class: "hint" },
      "Brainstorm intended uses (who benefits?) and unintended misuses (who exploits?)."),
    ...session.use_cases.map((useCase) => useCaseRow(store, useCase)),
    addForm(),
    el("div", { class: "row" },
      el("button", {
        class: "primary",
        name: "suggest-use-cases",
        onclick: () => void store.fetchUseCaseSuggestions(),
      }, store.seenUseCaseSuggestions.length ? "GET MORE SUGGESTIONS" : "GET SUGGESTIONS")),
    el("div", { class: "suggestions", "data-role": "use-case-suggestions" },
      ...store.useCaseSuggestions.map((_, index) => suggestionCard(store, index))),
  );
}
