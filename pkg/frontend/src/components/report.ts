// Report node: generate the three-section report, preview it, mint a share
// link. The shared view itself is token-only and carries no session state.

import { el } from "../dom.js";
import { Workbench } from "../state.js";

export function reportNode(store: Workbench): HTMLElement {
  const view = store.reportView;
  const shareUrl = store.shareToken ? `#/shared/${store.shareToken}` : null;

  return el("section", { class: "node node-report", "data-node": "summary" },
    el("h2", {}, "PIA report"),
    el("div", { class: "row" },
      el("button", {
        class: "primary",
        name: "generate-report",
        onclick: () => void store.generateReport(),
      }, "Generate report"),
      view ? el("button", {
        name: "share-report",
        onclick: () => void store.shareReport(),
      }, "Share") : null),
    shareUrl
      ? el("p", { class: "share-link" }, "Share link: ",
          el("a", { href: shareUrl }, shareUrl))
      : null,
    view ? el("pre", { class: "report-preview" }, view.markdown) : null,
  );
}

export function sharedView(markdown: string): HTMLElement {
  return el("main", { class: "shared-report" },
    el("h1", {}, "Shared privacy impact assessment"),
    el("pre", { class: "report-preview" }, markdown));
}
