// DOM builders. Every rendered item card carries its IRI in data-item so
// results are always traceable to the server response that produced them.

import type { Diagnosis, Recommendation, Vocabulary } from "./types.js";
import type { FormState, PreferenceKey } from "./state.js";
import { CONSTRAINT_NAMES } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) node.textContent = text;
  return node;
}

function option(value: string, label?: string): HTMLOptionElement {
  return el("option", { value }, label ?? value);
}

const FIELD_LABELS: Record<PreferenceKey, string> = {
  seats: "Seats",
  vehicleType: "Vehicle type",
  brand: "Brand",
  color: "Colors",
  maxMileage: "Max mileage (km)",
  maxBudget: "Max budget (€)",
  profile: "Profile",
};

export function renderForm(root: HTMLElement, vocabulary: Vocabulary): void {
  const form = el("form", { id: "preference-form" });

  const addRow = (key: PreferenceKey, input: HTMLElement) => {
    const row = el("div", { class: "form-row" });
    const label = el("label", { for: `input-${key}` }, FIELD_LABELS[key]);
    input.id = `input-${key}`;
    row.append(label, input, el("span", {
      class: "field-error",
      "data-field": key,
      hidden: "hidden",
    }));
    form.append(row);
  };

  const seats = el("select");
  seats.append(option("", "any"));
  for (const n of vocabulary.seats) seats.append(option(String(n)));
  addRow("seats", seats);

  const body = el("select");
  body.append(option("", "any"));
  for (const token of vocabulary.bodyTypes) body.append(option(token));
  addRow("vehicleType", body);

  const brand = el("select");
  brand.append(option("", "any"));
  for (const name of vocabulary.brands) brand.append(option(name));
  addRow("brand", brand);

  const colors = el("select", { multiple: "multiple", size: "6" });
  for (const color of vocabulary.colors) colors.append(option(color));
  addRow("color", colors);

  const mileage = el("input", { type: "number", min: "0", placeholder: "any" });
  addRow("maxMileage", mileage);

  const budget = el("input", { type: "number", min: "1", placeholder: "any" });
  addRow("maxBudget", budget);

  const profile = el("select");
  profile.append(option("", "none"));
  for (const token of vocabulary.profiles) profile.append(option(token));
  addRow("profile", profile);

  const importanceBlock = el("div", { class: "form-row" });
  importanceBlock.append(
    el("label", {}, "Importance (most important first)"),
    el("ol", { id: "importance-list" }),
  );
  form.append(importanceBlock);

  form.append(el("button", { type: "submit", id: "submit" }, "Find vehicles"));
  form.append(el("span", {
    class: "field-error",
    "data-field": "importance",
    hidden: "hidden",
  }));
  root.append(form);
}

export function renderImportance(listNode: HTMLElement, state: FormState): void {
  listNode.textContent = "";
  state.importance.forEach((key, index) => {
    const item = el("li", {
      class: "importance-item",
      draggable: "true",
      "data-key": key,
    });
    item.append(el("span", { class: "importance-label" }, FIELD_LABELS[key]));
    const up = el("button", {
      type: "button",
      class: "rank-up",
      "data-key": key,
      title: "more important",
    }, "▲");
    const down = el("button", {
      type: "button",
      class: "rank-down",
      "data-key": key,
      title: "less important",
    }, "▼");
    if (index === 0) up.setAttribute("disabled", "disabled");
    if (index === state.importance.length - 1) down.setAttribute("disabled", "disabled");
    item.append(up, down);
    listNode.append(item);
  });
}

export function renderCards(
  container: HTMLElement,
  items: Recommendation[],
): void {
  container.textContent = "";
  if (items.length === 0) {
    container.append(el("p", { id: "no-match" }, "No matching vehicles."));
    return;
  }
  for (const rec of items) {
    const card = el("article", { class: "item-card", "data-item": rec.item });
    const a = rec.attributes;
    card.append(el("h3", { class: "card-name" }, a.name ?? rec.item));
    const facts = el("dl");
    const fact = (label: string, value: string) => {
      facts.append(el("dt", {}, label), el("dd", {}, value));
    };
    fact("brand", a.brand ?? "—");
    fact("seats", a.seats !== null ? String(a.seats) : "—");
    fact("mileage", a.mileage !== null ? `${a.mileage} km` : "—");
    fact("price", a.price !== null ? `${a.price} €` : "—");
    card.append(facts);
    container.append(card);
  }
}

export function renderBanner(
  container: HTMLElement,
  applied: Diagnosis | null,
): void {
  container.textContent = "";
  if (!applied) return;
  const banner = el("div", { id: "relaxation-banner", role: "status" });
  banner.append(el(
    "strong",
    {},
    `Relaxed: ${applied.removed.join(", ") || "nothing"}`,
  ));
  banner.append(el(
    "span",
    { class: "banner-count" },
    ` ${applied.solutionCount} matching vehicles`,
  ));
  container.append(banner);
}

export function renderChips(
  container: HTMLElement,
  suggestions: Diagnosis[],
  constraintToggles: string[],
  selected: Set<string>,
): void {
  container.textContent = "";
  if (suggestions.length > 0) {
    const suggested = el("div", { id: "suggested-deltas" });
    suggested.append(el("span", { class: "chip-group-label" }, "Suggestions:"));
    for (const diagnosis of suggestions) {
      const chip = el("button", {
        type: "button",
        class: "chip chip-suggestion",
        "data-delta": diagnosis.removed.join(","),
      }, `drop ${diagnosis.removed.join(" + ")} (${diagnosis.solutionCount})`);
      suggested.append(chip);
    }
    container.append(suggested);
  }
  if (constraintToggles.length > 0) {
    const toggles = el("div", { id: "constraint-toggles" });
    toggles.append(el("span", { class: "chip-group-label" }, "Relax:"));
    for (const name of constraintToggles) {
      const chip = el("button", {
        type: "button",
        class: "chip chip-toggle",
        "data-name": name,
        "aria-pressed": selected.has(name) ? "true" : "false",
      }, name);
      toggles.append(chip);
    }
    container.append(toggles);
  }
}

export function renderStatus(
  container: HTMLElement,
  message: string | null,
  retryable: boolean,
): void {
  container.textContent = "";
  if (message === null) return;
  const status = el("div", { id: "status", role: "alert" }, message);
  if (retryable) {
    status.append(el("button", { type: "button", id: "retry" }, "Retry"));
  }
  container.append(status);
}

export function showFieldError(
  root: HTMLElement,
  field: string,
  reason: string | null,
): void {
  const node = root.querySelector<HTMLElement>(
    `.field-error[data-field="${field}"]`,
  );
  if (!node) return;
  if (reason === null) {
    node.hidden = true;
    node.textContent = "";
  } else {
    node.hidden = false;
    node.textContent = reason;
  }
}

export function clearFieldErrors(root: HTMLElement): void {
  for (const node of root.querySelectorAll<HTMLElement>(".field-error")) {
    node.hidden = true;
    node.textContent = "";
  }
}

export { CONSTRAINT_NAMES };
