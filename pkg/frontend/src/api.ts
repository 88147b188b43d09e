// Typed client for the classification service HTTP API.

export interface HealthResponse {
  status: string;
  model_loaded: boolean;
}

export interface ModelInfo {
  input_shape: number[];
  class_labels: string[];
  parameter_count: number;
  layers: Array<Record<string, unknown>>;
  model_version: string;
}

export interface PredictionResponse {
  predicted_index: number;
  predicted_label: string;
  probabilities: Record<string, number>;
  model_version: string;
}

/** Non-2xx response, carrying the body's machine-readable error code. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string | null;
  readonly detail: string | null;

  constructor(status: number, code: string | null, detail: string | null) {
    super(`HTTP ${status}${code === null ? "" : ` ${code}`}`);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code: string | null = null;
  let detail: string | null = null;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    code = body.error ?? null;
    detail = body.message ?? null;
  } catch {
    // non-JSON error body; status alone will have to do
  }
  return new ApiError(response.status, code, detail);
}

export async function getHealth(base: string): Promise<HealthResponse> {
  const response = await fetch(`${base}/health`);
  if (!response.ok) throw await parseError(response);
  return (await response.json()) as HealthResponse;
}

export async function getModelInfo(base: string): Promise<ModelInfo> {
  const response = await fetch(`${base}/model`);
  if (!response.ok) throw await parseError(response);
  return (await response.json()) as ModelInfo;
}

export async function predict(
  base: string,
  file: Blob,
  filename: string,
): Promise<PredictionResponse> {
  const form = new FormData();
  form.append("image", file, filename);
  const response = await fetch(`${base}/predict`, { method: "POST", body: form });
  if (!response.ok) throw await parseError(response);
  return (await response.json()) as PredictionResponse;
}
