// Product-description node: the editable concept that seeds everything else.

import { clear, el } from "../dom.js";
import { Workbench } from "../state.js";

export function conceptNode(store: Workbench): HTMLElement {
  const session = store.session!;
  const concept = session.concept;

  const name = el("input", { class: "field", name: "concept-name" });
  name.value = concept.name;
  const purpose = el("textarea", { class: "field", name: "concept-purpose" });
  purpose.value = concept.purpose;
  const data = el("textarea", { class: "field", name: "concept-data" });
  data.value = concept.data_description;
  const example = el("textarea", { class: "field", name: "concept-example" });
  example.value = concept.example_use_case;

  const save = el("button", {
    class: "primary",
    onclick: () => {
      void store.mutate((id, version) => store.api.updateConcept(id, version, {
        name: name.value,
        purpose: purpose.value,
        data_description: data.value,
        example_use_case: example.value,
      }));
    },
  }, "Save concept");

  const node = el("section", { class: "node node-concept", "data-node": "product-description" },
    el("h2", {}, "Product description"),
    el("label", {}, "Name", name),
    el("label", {}, "Purpose", purpose),
    el("label", {}, "Data it needs", data),
    el("label", {}, "Example use case", example),
    save,
  );
  return node;
}

export function creationForm(store: Workbench): HTMLElement {
  const name = el("input", { class: "field", name: "new-name", placeholder: "Product name" });
  const purpose = el("textarea", {
    class: "field", name: "new-purpose", placeholder: "What does the product do?",
  });
  const data = el("textarea", {
    class: "field", name: "new-data", placeholder: "What data does it need?",
  });
  const error = el("p", { class: "form-error" });

  const create = el("button", {
    class: "primary", name: "create-session",
    onclick: async () => {
      clear(error);
      try {
        const session = await store.api.createSession({
          name: name.value,
          purpose: purpose.value,
          data_description: data.value,
          example_use_case: "",
        });
        window.location.hash = `#/session/${session.id}`;
        store.adopt(session);
      } catch (exc) {
        error.append(String(exc instanceof Error ? exc.message : exc));
      }
    },
  }, "Start assessment");

  return el("section", { class: "node node-create" },
    el("h2", {}, "New privacy impact assessment"),
    el("label", {}, "Name", name),
    el("label", {}, "Purpose", purpose),
    el("label", {}, "Data", data),
    create,
    error,
  );
}
