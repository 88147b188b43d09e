// Banner text for server responses and local failures.

function describeLimit(detail: string | null): string {
  // the 413 body says "body exceeds N bytes"; surface that as MiB
  const match = detail === null ? null : detail.match(/(\d+) bytes/);
  if (match === null) return "the server's upload size limit";
  const bytes = Number(match[1]);
  const mib = bytes / (1024 * 1024);
  const rounded = Number.isInteger(mib) ? mib.toFixed(0) : mib.toFixed(1);
  return `the ${rounded} MiB upload limit`;
}

export function errorBanner(
  status: number,
  code: string | null,
  detail: string | null = null,
): string {
  if (status === 400 && code === "decode_failed") {
    return "file is not a readable PNG/JPEG";
  }
  if (status === 400 && code === "missing_image_field") {
    return "upload did not include an image";
  }
  if (status === 413) {
    return `image exceeds ${describeLimit(detail)}`;
  }
  if (status === 415) {
    return "unsupported file type: send a PNG or JPEG image";
  }
  if (status === 503) {
    return "the server has no model loaded";
  }
  return `server error (HTTP ${status}${code === null ? "" : `, ${code}`})`;
}

export const NETWORK_ERROR_BANNER =
  "could not reach the server; check the endpoint and try again";
