// Preference form model: one field per user variable plus an ordered
// importance list over the filled fields.

import type { ProfileDocument } from "./types.js";

export const PREFERENCE_KEYS = [
  "seats",
  "vehicleType",
  "brand",
  "color",
  "maxMileage",
  "maxBudget",
  "profile",
] as const;

export type PreferenceKey = (typeof PREFERENCE_KEYS)[number];

// preference keys that derive a removable filter constraint, and the
// constraint names the service knows them by
export const CONSTRAINT_NAMES: Partial<Record<PreferenceKey, string>> = {
  maxBudget: "Price",
  maxMileage: "Mileage",
  seats: "Seats",
  color: "Color",
  brand: "Brand",
  vehicleType: "VehicleType",
};

export interface FormState {
  userId: string;
  seats: number | null;
  vehicleType: string | null;
  brand: string | null;
  color: string[];
  maxMileage: number | null;
  maxBudget: number | null;
  profile: string | null;
  importance: PreferenceKey[]; // exactly the filled fields, most important first
}

export function emptyForm(userId: string): FormState {
  return {
    userId,
    seats: null,
    vehicleType: null,
    brand: null,
    color: [],
    maxMileage: null,
    maxBudget: null,
    profile: null,
    importance: [],
  };
}

export function isFilled(state: FormState, key: PreferenceKey): boolean {
  const value = state[key];
  return Array.isArray(value) ? value.length > 0 : value !== null;
}

export function filledKeys(state: FormState): PreferenceKey[] {
  return PREFERENCE_KEYS.filter((key) => isFilled(state, key));
}

/** Keep the importance list a permutation of the filled fields: drop
 * cleared ones, append newly filled ones at the end (least important). */
export function syncImportance(state: FormState): FormState {
  const filled = filledKeys(state);
  const kept = state.importance.filter((key) => filled.includes(key));
  for (const key of filled) {
    if (!kept.includes(key)) kept.push(key);
  }
  return { ...state, importance: kept };
}

/** Move one entry of the importance list to a new position (drag target
 * or up/down button). */
export function reorderImportance(
  state: FormState,
  key: PreferenceKey,
  newIndex: number,
): FormState {
  const order = state.importance.filter((k) => k !== key);
  const bounded = Math.max(0, Math.min(newIndex, order.length));
  order.splice(bounded, 0, key);
  return { ...state, importance: order };
}

export interface ValidationIssue {
  field: PreferenceKey | "importance";
  message: string;
}

/** Client-side checks mirroring the server rules. */
export function validateForm(state: FormState): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  if (state.seats !== null && (!Number.isInteger(state.seats) || state.seats <= 0)) {
    issues.push({ field: "seats", message: "seats must be a positive integer" });
  }
  if (state.maxMileage !== null && state.maxMileage < 0) {
    issues.push({ field: "maxMileage", message: "max mileage must be non-negative" });
  }
  if (state.maxBudget !== null && state.maxBudget <= 0) {
    issues.push({ field: "maxBudget", message: "max budget must be positive" });
  }
  const filled = filledKeys(state);
  const sameMembers =
    filled.length === state.importance.length &&
    filled.every((key) => state.importance.includes(key));
  if (!sameMembers) {
    issues.push({
      field: "importance",
      message: "importance order must cover exactly the filled fields",
    });
  }
  return issues;
}

export function toProfileDocument(state: FormState): ProfileDocument {
  const preferences: ProfileDocument["preferences"] = {};
  if (state.seats !== null) preferences.seats = state.seats;
  if (state.vehicleType !== null) preferences.vehicleType = state.vehicleType;
  if (state.brand !== null) preferences.brand = state.brand;
  if (state.color.length > 0) preferences.color = [...state.color];
  if (state.maxMileage !== null) preferences.maxMileage = state.maxMileage;
  if (state.maxBudget !== null) preferences.maxBudget = state.maxBudget;
  if (state.profile !== null) preferences.profile = state.profile;
  return {
    userId: state.userId,
    preferences,
    importance: [...state.importance],
  };
}

export function serializeForm(state: FormState): string {
  return JSON.stringify(state);
}

export function deserializeForm(text: string): FormState {
  const raw = JSON.parse(text) as FormState;
  const state: FormState = {
    ...emptyForm(raw.userId ?? "anonymous"),
    ...raw,
    color: Array.isArray(raw.color) ? [...raw.color] : [],
    importance: Array.isArray(raw.importance) ? [...raw.importance] : [],
  };
  return syncImportance(state);
}

/** The removable constraint names for the currently filled fields. */
export function constraintNames(state: FormState): string[] {
  return filledKeys(state)
    .map((key) => CONSTRAINT_NAMES[key])
    .filter((name): name is string => name !== undefined);
}
