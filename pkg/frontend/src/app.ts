// Application wiring: form state, the submit/relax interaction loop, and
// the guarantees the UI keeps — results always come from the latest
// server response, one in-flight request per action, form state survives
// failures.

import { ApiClient, ApiError, LatestGate, type FetchLike } from "./api.js";
import {
  constraintNames,
  deserializeForm,
  emptyForm,
  type FormState,
  type PreferenceKey,
  PREFERENCE_KEYS,
  reorderImportance,
  serializeForm,
  syncImportance,
  toProfileDocument,
  validateForm,
} from "./state.js";
import type { Diagnosis, ProfileDocument, Recommendation } from "./types.js";
import {
  clearFieldErrors,
  renderBanner,
  renderCards,
  renderChips,
  renderForm,
  renderImportance,
  renderStatus,
  showFieldError,
} from "./view.js";

const STORAGE_KEY = "kgrec-form";

export class App {
  private state: FormState;
  private gate = new LatestGate();
  private lastProfile: ProfileDocument | null = null;
  private offered: Diagnosis[] = [];
  private selectedDelta = new Set<string>();
  private lastItems: Recommendation[] = [];
  private retryAction: (() => void) | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    saved: string | null = null,
  ) {
    this.state = saved ? deserializeForm(saved) : emptyForm("browser-user");
  }

  static async mount(
    root: HTMLElement,
    baseUrl = "",
    fetchImpl?: FetchLike,
    saved: string | null = null,
  ): Promise<App> {
    const api = fetchImpl
      ? new ApiClient(baseUrl, fetchImpl)
      : new ApiClient(baseUrl);
    const app = new App(root, api, saved);
    await app.init();
    return app;
  }

  private section(id: string): HTMLElement {
    let node = this.root.querySelector<HTMLElement>(`#${id}`);
    if (!node) {
      node = document.createElement("section");
      node.id = id;
      this.root.append(node);
    }
    return node;
  }

  async init(): Promise<void> {
    this.root.textContent = "";
    const formHost = this.section("form-host");
    this.section("banner-host");
    this.section("chips-host");
    this.section("results-host");
    this.section("status-host");
    try {
      const vocabulary = await this.api.vocabulary();
      renderForm(formHost, vocabulary);
    } catch {
      renderStatus(this.section("status-host"),
        "Could not load the catalog vocabulary.", true);
      this.retryAction = () => void this.init();
      this.bindStatus();
      return;
    }
    this.applyStateToInputs();
    this.bindForm();
    this.refreshImportance();
  }

  // -- form plumbing -------------------------------------------------------

  private input(key: PreferenceKey): HTMLInputElement | HTMLSelectElement {
    return this.root.querySelector(`#input-${key}`)!;
  }

  private applyStateToInputs(): void {
    for (const key of PREFERENCE_KEYS) {
      const node = this.input(key);
      if (key === "color") {
        const select = node as HTMLSelectElement;
        for (const opt of Array.from(select.options)) {
          opt.selected = this.state.color.includes(opt.value);
        }
      } else {
        const value = this.state[key];
        node.value = value === null ? "" : String(value);
      }
    }
  }

  private readInputs(): void {
    for (const key of PREFERENCE_KEYS) {
      const node = this.input(key);
      if (key === "color") {
        const select = node as HTMLSelectElement;
        this.state.color = Array.from(select.selectedOptions).map(
          (o) => o.value,
        );
      } else if (key === "seats" || key === "maxMileage" || key === "maxBudget") {
        this.state[key] = node.value === "" ? null : Number(node.value);
      } else {
        this.state[key] = node.value === "" ? null : node.value;
      }
    }
    this.state = syncImportance(this.state);
  }

  private refreshImportance(): void {
    const list = this.root.querySelector<HTMLElement>("#importance-list");
    if (list) renderImportance(list, this.state);
  }

  private bindForm(): void {
    const form = this.root.querySelector<HTMLFormElement>("#preference-form")!;
    form.addEventListener("change", () => {
      this.readInputs();
      this.refreshImportance();
      this.persist();
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submit();
    });
    const list = this.root.querySelector<HTMLElement>("#importance-list")!;
    list.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      const key = target.getAttribute("data-key") as PreferenceKey | null;
      if (!key) return;
      const index = this.state.importance.indexOf(key);
      if (target.classList.contains("rank-up") && index > 0) {
        this.state = reorderImportance(this.state, key, index - 1);
      } else if (target.classList.contains("rank-down")) {
        this.state = reorderImportance(this.state, key, index + 1);
      }
      this.refreshImportance();
      this.persist();
    });
    // drag to rank: drop onto another row to take its place
    list.addEventListener("dragstart", (event) => {
      const item = (event.target as HTMLElement).closest(".importance-item");
      if (item && event instanceof DragEvent && event.dataTransfer) {
        event.dataTransfer.setData("text/plain",
          item.getAttribute("data-key") ?? "");
      }
    });
    list.addEventListener("dragover", (event) => event.preventDefault());
    list.addEventListener("drop", (event) => {
      if (!(event instanceof DragEvent) || !event.dataTransfer) return;
      event.preventDefault();
      const key = event.dataTransfer.getData("text/plain") as PreferenceKey;
      const over = (event.target as HTMLElement).closest(".importance-item");
      if (!key || !over) return;
      const overKey = over.getAttribute("data-key") as PreferenceKey;
      const target = this.state.importance.indexOf(overKey);
      if (target >= 0) {
        this.state = reorderImportance(this.state, key, target);
        this.refreshImportance();
        this.persist();
      }
    });
    this.bindStatus();
    this.section("chips-host").addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.classList.contains("chip-suggestion")) {
        const spec = target.getAttribute("data-delta") ?? "";
        const removed = spec === "" ? [] : spec.split(",");
        this.chooseRelaxation(removed);
      } else if (target.classList.contains("chip-toggle")) {
        const name = target.getAttribute("data-name")!;
        const next = new Set(this.selectedDelta);
        if (next.has(name)) next.delete(name);
        else next.add(name);
        this.chooseRelaxation([...next]);
      }
    });
  }

  private bindStatus(): void {
    this.section("status-host").addEventListener("click", (event) => {
      if ((event.target as HTMLElement).id === "retry" && this.retryAction) {
        const action = this.retryAction;
        this.retryAction = null;
        action();
      }
    });
  }

  private persist(): void {
    try {
      window.localStorage?.setItem(STORAGE_KEY, serializeForm(this.state));
    } catch {
      // storage unavailable (private mode, jsdom without storage): skip
    }
  }

  // -- the interaction loop -------------------------------------------------

  submit(): void {
    this.readInputs();
    clearFieldErrors(this.root);
    renderStatus(this.section("status-host"), null, false);
    const issues = validateForm(this.state);
    if (issues.length > 0) {
      for (const issue of issues) {
        showFieldError(this.root, issue.field, issue.message);
      }
      return;
    }
    const profile = toProfileDocument(this.state);
    this.lastProfile = profile;
    void this.gate.run(() => this.api.recommend(profile)).then(
      (response) => {
        if (response === null) return; // superseded by a newer action
        this.offered = response.appliedDelta
          ? [response.appliedDelta, ...response.alternatives]
          : [];
        this.selectedDelta = new Set(response.appliedDelta?.removed ?? []);
        this.showResults(response.recommendations, response.appliedDelta);
      },
      (error) => this.handleFailure(error, () => this.submit()),
    );
  }

  chooseRelaxation(removed: string[]): void {
    if (!this.lastProfile) return;
    const profile = this.lastProfile;
    renderStatus(this.section("status-host"), null, false);
    void this.gate.run(() => this.api.diagnose(profile, removed)).then(
      (response) => {
        if (response === null) return;
        this.selectedDelta = new Set(response.delta.removed);
        this.showResults(
          response.solutions,
          response.delta.removed.length > 0 ? response.delta : null,
        );
      },
      (error) =>
        this.handleFailure(error, () => this.chooseRelaxation(removed)),
    );
  }

  private showResults(
    items: Recommendation[],
    applied: Diagnosis | null,
  ): void {
    this.lastItems = items;
    renderCards(this.section("results-host"), items);
    renderBanner(this.section("banner-host"), applied);
    renderChips(
      this.section("chips-host"),
      this.offered,
      this.lastProfile
        ? constraintNames(deserializeProfile(this.lastProfile))
        : [],
      this.selectedDelta,
    );
  }

  private handleFailure(error: unknown, retry: () => void): void {
    if (error instanceof ApiError && error.detail) {
      const field = error.detail.field.replace(/^preferences\./, "");
      showFieldError(this.root, field, error.detail.reason);
      return;
    }
    this.retryAction = retry;
    renderStatus(
      this.section("status-host"),
      "The service is unreachable; your preferences are kept.",
      true,
    );
  }

  /** Every rendered card's IRI (test hook for the no-fabrication check). */
  renderedItems(): string[] {
    return Array.from(
      this.root.querySelectorAll<HTMLElement>(".item-card"),
    ).map((node) => node.getAttribute("data-item")!);
  }

  currentState(): FormState {
    return this.state;
  }

  lastResponseItems(): string[] {
    return this.lastItems.map((rec) => rec.item);
  }
}

/** Rebuild a FormState view of the submitted profile so the constraint
 * toggles reflect what the server actually saw. */
function deserializeProfile(profile: ProfileDocument): FormState {
  const state = emptyForm(profile.userId);
  const p = profile.preferences;
  state.seats = p.seats ?? null;
  state.vehicleType = p.vehicleType ?? null;
  state.brand = p.brand ?? null;
  state.color = p.color ? [...p.color] : [];
  state.maxMileage = p.maxMileage ?? null;
  state.maxBudget = p.maxBudget ?? null;
  state.profile = p.profile ?? null;
  return syncImportance(state);
}
