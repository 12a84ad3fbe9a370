// Bootstrap: hash routing (#/session/{id}, #/shared/{token}) and full
// re-render of the workspace whenever the store changes.

import { ApiClient } from "./api.js";
import { capabilityNode } from "./components/capability.js";
import { conceptNode, creationForm } from "./components/concept.js";
import { mitigationNode } from "./components/mitigation.js";
import { rankingPanel } from "./components/ranking.js";
import { reportNode, sharedView } from "./components/report.js";
import { riskExplorer } from "./components/risks.js";
import { useCaseNode } from "./components/useCases.js";
import { clear, el } from "./dom.js";
import { Workbench } from "./state.js";

function bannerBar(store: Workbench): HTMLElement | null {
  if (!store.banner) return null;
  return el("div", { class: `banner banner-${store.banner.tone}`, role: "alert" },
    store.banner.text,
    el("button", { class: "dismiss", onclick: () => store.setBanner(null) }, "×"));
}

function workspace(store: Workbench): HTMLElement {
  return el("main", { class: "workspace" },
    el("div", { class: "canvas-column" },
      conceptNode(store),
      useCaseNode(store),
      capabilityNode(store)),
    el("div", { class: "canvas-column" },
      riskExplorer(store),
      rankingPanel(store)),
    el("div", { class: "canvas-column" },
      mitigationNode(store),
      reportNode(store)),
  );
}

export function render(root: HTMLElement, store: Workbench): void {
  clear(root);
  const banner = bannerBar(store);
  if (banner) root.append(banner);
  if (store.busy) {
    root.append(el("div", { class: "busy", "data-role": "busy" }, "Thinking…"));
  }
  if (!store.session) {
    root.append(creationForm(store));
    return;
  }
  root.append(
    el("header", { class: "topbar" },
      el("h1", {}, store.session.concept.name || "AI product concept"),
      el("span", { class: "chip" }, `v${store.session.version}`),
      el("span", { class: "chip" }, store.session.stage_hint)),
    workspace(store),
  );
}

export interface App {
  store: Workbench;
  root: HTMLElement;
}

/** Mount the workbench; the API client is injectable for tests. */
export async function createApp(root: HTMLElement, api: ApiClient): Promise<App> {
  const store = new Workbench(api);
  store.subscribe(() => render(root, store));

  const hash = window.location.hash;
  const shared = hash.match(/^#\/shared\/([A-Za-z0-9_-]+)$/);
  if (shared) {
    try {
      const payload = await api.fetchShared(shared[1]);
      clear(root);
      root.append(sharedView(payload.markdown));
    } catch {
      clear(root);
      root.append(el("p", { class: "form-error" }, "Unknown or expired share link."));
    }
    return { store, root };
  }

  await store.loadTaxonomy();
  const sessionMatch = hash.match(/^#\/session\/([A-Za-z0-9_-]+)$/);
  if (sessionMatch) {
    try {
      await store.openSession(sessionMatch[1]);
    } catch {
      store.setBanner({ tone: "error", text: "Session not found; start a new one." });
    }
  }
  render(root, store);
  return { store, root };
}

const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount && !mount.hasAttribute("data-test")) {
  void createApp(mount, new ApiClient(""));
}
