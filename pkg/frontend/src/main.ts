// Page wiring: drag-and-drop upload, health indicator, result rendering.

import { ApiError, getModelInfo, predict } from "./api.js";
import { barsHtml } from "./bars.js";
import { loadBase, saveBase } from "./config.js";
import { precheckFile } from "./filecheck.js";
import { startHealthPolling } from "./health.js";
import { errorBanner, NETWORK_ERROR_BANNER } from "./messages.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el as T;
}

const endpointInput = byId<HTMLInputElement>("endpoint");
const healthDot = byId<HTMLSpanElement>("health-dot");
const healthText = byId<HTMLSpanElement>("health-text");
const dropZone = byId<HTMLDivElement>("drop-zone");
const fileInput = byId<HTMLInputElement>("file-input");
const banner = byId<HTMLDivElement>("error-banner");
const result = byId<HTMLDivElement>("result");
const preview = byId<HTMLImageElement>("preview");
const predictedLabel = byId<HTMLDivElement>("predicted-label");
const barsBox = byId<HTMLDivElement>("bars");
const modelLine = byId<HTMLDivElement>("model-line");

let base = loadBase(window.localStorage);
let serverUp = false;
let busy = false;
let previewUrl: string | null = null;

endpointInput.value = base;
endpointInput.addEventListener("change", () => {
  base = saveBase(window.localStorage, endpointInput.value);
  endpointInput.value = base;
  void refreshModelLine();
});

function setBanner(text: string | null): void {
  banner.textContent = text ?? "";
  banner.classList.toggle("hidden", text === null);
}

function updateSubmitState(): void {
  const enabled = serverUp && !busy;
  dropZone.classList.toggle("disabled", !enabled);
  fileInput.disabled = !enabled;
}

startHealthPolling(
  () => base,
  (status) => {
    serverUp = status.reachable;
    healthDot.className = `dot ${status.reachable ? "ok" : "down"}`;
    healthText.textContent = status.reachable
      ? status.modelLoaded
        ? "server up"
        : "server up, no model"
      : "server unreachable";
    updateSubmitState();
  },
);

async function refreshModelLine(): Promise<void> {
  try {
    const info = await getModelInfo(base);
    const shape = info.input_shape.join("x");
    modelLine.textContent =
      `model ${info.model_version}: ${shape} input, ` +
      `${info.parameter_count.toLocaleString()} parameters, ` +
      `classes: ${info.class_labels.join(", ")}`;
  } catch {
    modelLine.textContent = "";
  }
}
void refreshModelLine();

function showResult(label: string, probabilities: Record<string, number>, version: string): void {
  predictedLabel.textContent = label;
  barsBox.innerHTML = barsHtml(probabilities);
  modelLine.textContent = modelLine.textContent || `model ${version}`;
  result.classList.remove("hidden");
}

async function handleFile(file: File): Promise<void> {
  if (busy || !serverUp) return;
  setBanner(null);

  const head = new Uint8Array(await file.slice(0, 16).arrayBuffer());
  const check = precheckFile(file.name, head);
  if (!check.ok) {
    setBanner(check.reason);
    return;
  }

  if (previewUrl !== null) URL.revokeObjectURL(previewUrl);
  previewUrl = URL.createObjectURL(file);
  preview.src = previewUrl;

  busy = true;
  updateSubmitState();
  dropZone.classList.add("busy");
  try {
    const response = await predict(base, file, file.name);
    showResult(response.predicted_label, response.probabilities, response.model_version);
  } catch (err) {
    result.classList.add("hidden");
    if (err instanceof ApiError) {
      setBanner(errorBanner(err.status, err.code, err.detail));
    } else {
      setBanner(NETWORK_ERROR_BANNER);
    }
  } finally {
    busy = false;
    dropZone.classList.remove("busy");
    updateSubmitState();
  }
}

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0];
  if (file !== undefined) void handleFile(file);
  fileInput.value = "";
});

for (const eventName of ["dragenter", "dragover"] as const) {
  dropZone.addEventListener(eventName, (e) => {
    e.preventDefault();
    if (serverUp && !busy) dropZone.classList.add("dragging");
  });
}
for (const eventName of ["dragleave", "drop"] as const) {
  dropZone.addEventListener(eventName, (e) => {
    e.preventDefault();
    dropZone.classList.remove("dragging");
  });
}
dropZone.addEventListener("drop", (e) => {
  const file = e.dataTransfer?.files?.[0];
  if (file !== undefined) void handleFile(file);
});
dropZone.addEventListener("click", () => {
  if (serverUp && !busy) fileInput.click();
});
