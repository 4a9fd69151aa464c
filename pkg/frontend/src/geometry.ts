// Pointer capture, decimation, and raw-token extraction from service JSON.
// No physics lives here: geometry is limited to spacing/closing decisions.

export interface Pt {
  x: number;
  y: number;
}

export type PointerKind = "down" | "move" | "up";

export interface PointerSample extends Pt {
  kind: PointerKind;
}

export interface CapturedPath {
  closed: boolean;
  vertices: Pt[];
}

export interface CaptureOptions {
  /** minimum spacing between kept samples, world units (default ell / 100) */
  minSpacing: number;
  /** release within this distance of the start marks the path closed */
  closeRadius: number;
}

const dist = (a: Pt, b: Pt) => Math.hypot(a.x - b.x, a.y - b.y);

/** Keep the first sample, then every sample at least minSpacing from the last kept. */
export function decimate(samples: Pt[], minSpacing: number): Pt[] {
  const kept: Pt[] = [];
  for (const s of samples) {
    const last = kept[kept.length - 1];
    if (last === undefined || dist(s, last) >= minSpacing) {
      kept.push({ x: s.x, y: s.y });
    }
  }
  return kept;
}

export interface CaptureResult {
  path: CapturedPath | null;
  /** set when the gesture was discarded */
  notice?: string;
}

/**
 * Turn a full down..move..up gesture into a path. The release point closes
 * the path when it lands near the start; otherwise it becomes the final
 * vertex (subject to spacing).
 */
export function capturePath(samples: PointerSample[], opts: CaptureOptions): CaptureResult {
  if (samples.length === 0) {
    return { path: null, notice: "empty gesture" };
  }
  const release = samples[samples.length - 1]!.kind === "up"
    ? samples[samples.length - 1]!
    : null;
  const body = release ? samples.slice(0, -1) : samples;
  const vertices = decimate(body, opts.minSpacing);
  let closed = false;
  if (release && vertices.length > 0) {
    if (dist(release, vertices[0]!) <= opts.closeRadius) {
      closed = true;
    } else if (dist(release, vertices[vertices.length - 1]!) >= opts.minSpacing) {
      vertices.push({ x: release.x, y: release.y });
    }
  }
  if (vertices.length < 3) {
    return { path: null, notice: "too few samples; trace discarded" };
  }
  return { path: { closed, vertices } };
}

/** Serialize in the engine's path schema. */
export function pathToJson(path: CapturedPath): string {
  const verts = path.vertices.map((p) => `[${p.x},${p.y}]`).join(",");
  return `{"closed":${path.closed},"vertices":[${verts}]}`;
}

/**
 * Extract the raw text of a scalar field from a JSON document, byte for byte
 * as the service serialized it. Displayed numbers go through this rather
 * than parse/re-format, so what the user sees IS the engine's answer.
 */
export function extractRawNumber(json: string, key: string): string | null {
  const m = json.match(new RegExp(`"${key}":(-?[0-9][^,}\\]]*)`));
  return m ? m[1]! : null;
}

export function extractRawString(json: string, key: string): string | null {
  const m = json.match(new RegExp(`"${key}":"((?:[^"\\\\]|\\\\.)*)"`));
  return m ? m[1]! : null;
}
