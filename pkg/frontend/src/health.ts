// Health polling for the status indicator.

import { getHealth } from "./api.js";

export interface HealthStatus {
  reachable: boolean;
  modelLoaded: boolean;
}

export async function pollOnce(base: string): Promise<HealthStatus> {
  try {
    const health = await getHealth(base);
    return { reachable: health.status === "ok", modelLoaded: health.model_loaded };
  } catch {
    return { reachable: false, modelLoaded: false };
  }
}

/** Poll immediately and then on an interval; returns a stop function. */
export function startHealthPolling(
  base: () => string,
  onChange: (status: HealthStatus) => void,
  intervalMs = 5000,
): () => void {
  let stopped = false;
  const tick = async () => {
    const status = await pollOnce(base());
    if (!stopped) onChange(status);
  };
  void tick();
  const timer = setInterval(() => void tick(), intervalMs);
  return () => {
    stopped = true;
    clearInterval(timer);
  };
}
