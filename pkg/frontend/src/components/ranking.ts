// Drag-and-drop risk ranking. A drop emits the full permutation as one PUT;
// the list always re-renders in the server-confirmed order.

import { el } from "../dom.js";
import { Workbench } from "../state.js";

let draggedId: string | null = null;

export function rankingPanel(store: Workbench): HTMLElement {
  const ranked = store.rankedAssessments();
  const pending = store.pendingAssessments().length;

  const submit = (orderedIds: string[]) => {
    void store.mutate((id, version) => store.api.putRanking(id, version, orderedIds));
  };

  const list = el("ol", { class: "ranking", "data-role": "ranking" });
  ranked.forEach((assessment) => {
    const risk = store.taxonomy?.risks.find((r) => r.id === assessment.risk_type);
    const item = el("li", {
      class: "ranked-risk",
      draggable: "true",
      "data-id": assessment.id,
    },
      el("span", { class: "grip" }, "⠿"),
      el("strong", {}, risk ? risk.display_name : assessment.risk_type),
      el("span", { class: "chip" }, `relevancy ${assessment.relevancy}`),
      el("span", { class: "chip" }, `severity ${assessment.severity}`));

    item.addEventListener("dragstart", (event) => {
      draggedId = assessment.id;
      // dataTransfer is absent on synthetic events (test environments)
      const transfer = (event as DragEvent).dataTransfer;
      if (transfer) {
        transfer.effectAllowed = "move";
        transfer.setData("text/plain", assessment.id);
      }
      item.classList.add("dragging");
    });
    item.addEventListener("dragend", () => {
      draggedId = null;
      item.classList.remove("dragging");
    });
    item.addEventListener("dragover", (event) => event.preventDefault());
    item.addEventListener("drop", (event) => {
      event.preventDefault();
      if (!draggedId || draggedId === assessment.id) return;
      const order = ranked.map((a) => a.id).filter((id) => id !== draggedId);
      const targetIndex = order.indexOf(assessment.id);
      order.splice(targetIndex, 0, draggedId);
      draggedId = null;
      submit(order);
    });
    list.append(item);
  });

  return el("section", { class: "node node-ranking", "data-node": "risk-assessment" },
    el("h2", {}, "Risk ranking"),
    el("p", { class: "hint" },
      "Drag risks into the order they should be addressed. Only rated risks rank; " +
      (pending ? `${pending} pending rating.` : "all assessments are rated.")),
    ranked.length ? list : el("p", { class: "empty" }, "No rated risks yet."),
  );
}
