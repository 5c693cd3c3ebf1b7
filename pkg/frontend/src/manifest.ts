/**
 * Provenance manifest written next to each rendered image: every input
 * path with its content hash, so a figure can always be traced back to
 * the exact CSV bytes it was drawn from.
 */

import { createHash } from "node:crypto";

export interface ManifestEntry {
  path: string;
  sha256: string;
}

export interface Manifest {
  kind: string;
  output: string;
  inputs: ManifestEntry[];
}

export function sha256(data: string | Buffer): string {
  return createHash("sha256").update(data).digest("hex");
}

export function buildManifest(kind: string, output: string,
                              inputs: Array<{ path: string; text: string }>): Manifest {
  return {
    kind,
    output,
    inputs: inputs.map(({ path, text }) => ({ path, sha256: sha256(text) })),
  };
}

export function manifestJson(manifest: Manifest): string {
  return JSON.stringify(manifest, null, 2) + "\n";
}

export function manifestPath(imagePath: string): string {
  return imagePath + ".manifest.json";
}
