// Endpoint base URL resolution: build-time default plus a locally
// persisted override from the settings field.

export const DEFAULT_BASE = "/api/v1";
export const STORAGE_KEY = "cxr-endpoint-base";

type StorageLike = Pick<Storage, "getItem" | "setItem" | "removeItem">;

/** Trim whitespace and trailing slashes; empty input falls back to the default. */
export function normalizeBase(raw: string): string {
  const trimmed = raw.trim().replace(/\/+$/, "");
  return trimmed === "" ? DEFAULT_BASE : trimmed;
}

export function loadBase(storage: StorageLike): string {
  const stored = storage.getItem(STORAGE_KEY);
  return stored === null ? DEFAULT_BASE : normalizeBase(stored);
}

/** Persist an override; clearing the field resets to the default. */
export function saveBase(storage: StorageLike, raw: string): string {
  const base = normalizeBase(raw);
  if (base === DEFAULT_BASE) {
    storage.removeItem(STORAGE_KEY);
  } else {
    storage.setItem(STORAGE_KEY, base);
  }
  return base;
}
