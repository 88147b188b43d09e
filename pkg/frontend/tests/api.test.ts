import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, getHealth, getModelInfo, predict } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("getHealth", () => {
  it("parses the health payload", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(200, { status: "ok", model_loaded: true }));
    vi.stubGlobal("fetch", fetchMock);
    const health = await getHealth("/api/v1");
    expect(health).toEqual({ status: "ok", model_loaded: true });
    expect(fetchMock).toHaveBeenCalledWith("/api/v1/health");
  });

  it("respects a custom base URL", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(200, { status: "ok", model_loaded: false }));
    vi.stubGlobal("fetch", fetchMock);
    await getHealth("http://host:9000/api/v1");
    expect(fetchMock).toHaveBeenCalledWith("http://host:9000/api/v1/health");
  });
});

describe("getModelInfo", () => {
  it("parses the model metadata", async () => {
    const payload = {
      input_shape: [300, 300, 3],
      class_labels: ["covid", "influenza", "normal"],
      parameter_count: 10921667,
      layers: [{ kind: "conv" }],
      model_version: "crc32:deadbeef",
    };
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(200, payload)));
    expect(await getModelInfo("/api/v1")).toEqual(payload);
  });

  it("raises ApiError with the body's error code on 503", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(503, { error: "model_not_loaded" })));
    const err = await getModelInfo("/api/v1").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    if (err instanceof ApiError) {
      expect(err.status).toBe(503);
      expect(err.code).toBe("model_not_loaded");
      expect(err.detail).toBe(null);
    }
  });
});

describe("predict", () => {
  it("posts the file as multipart field \"image\"", async () => {
    const calls: Array<{ url: string; init: RequestInit | undefined }> = [];
    const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
      calls.push({ url, init });
      return jsonResponse(200, {
        predicted_index: 2,
        predicted_label: "normal",
        probabilities: { covid: 0.1, influenza: 0.2, normal: 0.7 },
        model_version: "crc32:deadbeef",
      });
    });
    vi.stubGlobal("fetch", fetchMock);

    const blob = new Blob([new Uint8Array([0x89, 0x50, 0x4e, 0x47])], { type: "image/png" });
    const response = await predict("/api/v1", blob, "scan.png");

    expect(response.predicted_label).toBe("normal");
    expect(calls).toHaveLength(1);
    expect(calls[0]?.url).toBe("/api/v1/predict");
    expect(calls[0]?.init?.method).toBe("POST");
    const body = calls[0]?.init?.body;
    expect(body).toBeInstanceOf(FormData);
    if (body instanceof FormData) {
      const part = body.get("image");
      expect(part).toBeInstanceOf(File);
      if (part instanceof File) expect(part.name).toBe("scan.png");
    }
  });

  it("carries the error code and message from a failed response", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        jsonResponse(413, { error: "payload_too_large", message: "body exceeds 1024 bytes" }),
      ),
    );
    const err = await predict("/api/v1", new Blob([""]), "big.png").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    if (err instanceof ApiError) {
      expect(err.status).toBe(413);
      expect(err.code).toBe("payload_too_large");
      expect(err.detail).toBe("body exceeds 1024 bytes");
      expect(err.message).toBe("HTTP 413 payload_too_large");
    }
  });

  it("tolerates a non-JSON error body", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response("<html>bad gateway</html>", { status: 502 })),
    );
    const err = await predict("/api/v1", new Blob([""]), "x.png").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    if (err instanceof ApiError) {
      expect(err.status).toBe(502);
      expect(err.code).toBe(null);
    }
  });
});
