// Client-side pre-check before upload: extension plus magic bytes.
// Fails fast on obvious non-images; the server remains the authority.

const IMAGE_EXTENSIONS = [".png", ".jpg", ".jpeg"];
const PNG_MAGIC = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];
const JPEG_MAGIC = [0xff, 0xd8, 0xff];

export type FileCheck = { ok: true; kind: "png" | "jpeg" } | { ok: false; reason: string };

export function hasImageExtension(name: string): boolean {
  const lower = name.toLowerCase();
  return IMAGE_EXTENSIONS.some((ext) => lower.endsWith(ext));
}

export function sniffImageBytes(bytes: Uint8Array): "png" | "jpeg" | null {
  const startsWith = (magic: number[]) =>
    bytes.length >= magic.length && magic.every((b, i) => bytes[i] === b);
  if (startsWith(PNG_MAGIC)) return "png";
  if (startsWith(JPEG_MAGIC)) return "jpeg";
  return null;
}

export function precheckFile(name: string, bytes: Uint8Array): FileCheck {
  if (!hasImageExtension(name)) {
    return { ok: false, reason: `"${name}" is not a .png, .jpg, or .jpeg file` };
  }
  const kind = sniffImageBytes(bytes);
  if (kind === null) {
    return { ok: false, reason: `"${name}" does not start with PNG or JPEG image data` };
  }
  return { ok: true, kind };
}
