// Capability-summary node: merged narrative plus capability/requirement pairs.

import { el } from "../dom.js";
import { Workbench } from "../state.js";

export function capabilityNode(store: Workbench): HTMLElement {
  const session = store.session!;
  const summary = session.capability_summary;

  const text = el("textarea", { class: "field", name: "capability-text" });
  text.value = summary.text;

  const pairList = el("ul", { class: "pairs" },
    ...summary.pairs.map((pair) => el("li", {},
      el("strong", {}, pair.capability),
      el("ul", {}, ...pair.requirements.map((req) =>
        el("li", {}, `${req.dimension}: ${req.text}`))))));

  const proposal = store.capabilityProposal;
  const proposalPanel = proposal
    ? el("div", { class: "suggestion-card capability-proposal" },
        el("h3", {}, "Suggested summary"),
        el("p", {}, proposal.text),
        el("ul", {}, ...proposal.pairs.map((pair) =>
          el("li", {}, `${pair.capability} (${pair.requirements.length} requirements)`))),
        el("div", { class: "row" },
          el("button", { class: "accept", onclick: () => void store.acceptCapabilityProposal() },
            "Accept"),
          el("button", {
            class: "dismiss",
            onclick: () => { store.capabilityProposal = null; store.setBanner(null); },
          }, "Dismiss")))
    : null;

  return el("section", { class: "node node-capability", "data-node": "capability-summary" },
    el("h2", {}, "AI capabilities & requirements"),
    el("label", {}, "Summary", text),
    el("div", { class: "row" },
      el("button", {
        onclick: () => {
          void store.mutate((id, version) => store.api.putCapabilitySummary(id, version, {
            text: text.value,
            pairs: summary.pairs,
          }));
        },
      }, "Save"),
      el("button", {
        class: "primary",
        name: "suggest-capabilities",
        onclick: () => void store.fetchCapabilityProposal(),
      }, "GET SUGGESTIONS")),
    pairList,
    proposalPanel,
  );
}
