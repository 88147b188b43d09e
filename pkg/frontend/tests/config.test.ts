import { describe, expect, it } from "vitest";

import { DEFAULT_BASE, STORAGE_KEY, loadBase, normalizeBase, saveBase } from "../src/config.js";

function fakeStorage(initial: Record<string, string> = {}) {
  const data = new Map(Object.entries(initial));
  return {
    getItem: (key: string) => data.get(key) ?? null,
    setItem: (key: string, value: string) => void data.set(key, value),
    removeItem: (key: string) => void data.delete(key),
    data,
  };
}

describe("normalizeBase", () => {
  it("keeps a clean base unchanged", () => {
    expect(normalizeBase("/api/v1")).toBe("/api/v1");
    expect(normalizeBase("http://localhost:8000/api/v1")).toBe("http://localhost:8000/api/v1");
  });

  it("strips whitespace and trailing slashes", () => {
    expect(normalizeBase("  /api/v1/  ")).toBe("/api/v1");
    expect(normalizeBase("http://host:8000/api/v1///")).toBe("http://host:8000/api/v1");
  });

  it("falls back to the default for empty input", () => {
    expect(normalizeBase("")).toBe(DEFAULT_BASE);
    expect(normalizeBase("   ")).toBe(DEFAULT_BASE);
    expect(normalizeBase("///")).toBe(DEFAULT_BASE);
  });
});

describe("loadBase", () => {
  it("returns the default when nothing is stored", () => {
    expect(loadBase(fakeStorage())).toBe(DEFAULT_BASE);
  });

  it("returns the stored override, normalized", () => {
    const storage = fakeStorage({ [STORAGE_KEY]: "http://10.0.0.5:8000/api/v1/" });
    expect(loadBase(storage)).toBe("http://10.0.0.5:8000/api/v1");
  });
});

describe("saveBase", () => {
  it("persists a non-default override", () => {
    const storage = fakeStorage();
    const base = saveBase(storage, "http://host:9000/api/v1");
    expect(base).toBe("http://host:9000/api/v1");
    expect(storage.data.get(STORAGE_KEY)).toBe("http://host:9000/api/v1");
  });

  it("clears the stored key when reset to the default", () => {
    const storage = fakeStorage({ [STORAGE_KEY]: "http://host:9000/api/v1" });
    expect(saveBase(storage, "")).toBe(DEFAULT_BASE);
    expect(storage.data.has(STORAGE_KEY)).toBe(false);
    expect(saveBase(storage, DEFAULT_BASE)).toBe(DEFAULT_BASE);
    expect(storage.data.has(STORAGE_KEY)).toBe(false);
  });

  it("round-trips through loadBase", () => {
    const storage = fakeStorage();
    saveBase(storage, "  http://edge:8000/api/v1/ ");
    expect(loadBase(storage)).toBe("http://edge:8000/api/v1");
  });
});
