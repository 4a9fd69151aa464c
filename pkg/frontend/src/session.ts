// Tracing session: pointer capture, throttled live readouts, and what-if
// queries. Every displayed quantity is a raw token lifted from a service
// response (single source of truth); this module never computes physics.

import { EngineClient } from "./client.js";
import {
  capturePath, CapturedPath, decimate, extractRawNumber, extractRawString,
  pathToJson, PointerSample, Pt,
} from "./geometry.js";

export interface SessionOptions {
  client: EngineClient;
  ell: number;
  theta0: number;
  /** minimum interval between live /trace calls, ms (default 100 -> <= 10/s) */
  throttleMs?: number;
  /** decimation spacing as a fraction of ell (default 1/100) */
  minSpacingFactor?: number;
  /** closing-gesture radius as a fraction of ell (default 1/25) */
  closeRadiusFactor?: number;
  /** downsample count requested from /trace */
  samples?: number;
}

export interface LiveReadout {
  /** raw response tokens, byte for byte as the engine serialized them */
  reading: string | null;
  sigma: string | null;
  deltaTheta: string | null;
  thetaFinal: string | null;
  /** parsed copies for rendering only (dial needle, curve drawing) */
  deltaThetaValue: number | null;
  chisel: Pt[];
}

export interface HolonomyBadge {
  kind: string | null;
  trace: string | null;
  windingPrediction: string | null;
  /** unit-circle fixed directions, parsed for marker rendering */
  fixedPoints: Pt[];
}

export interface WhatIfView {
  requestBody: string;
  responseText: string;
  reading: string | null;
  readingOpposite: string | null;
  averagedReading: string | null;
  predicted: string | null;
  averagedPredicted: string | null;
  area: string | null;
}

export class TracingSession {
  ell: number;
  theta0: number;
  baseIndex = 0;

  engineDown = false;
  notices: string[] = [];

  /** vertices captured so far (decimated), world units */
  liveVertices: Pt[] = [];
  /** finished closed loop, if the last gesture closed */
  closedPath: CapturedPath | null = null;

  readout: LiveReadout = {
    reading: null, sigma: null, deltaTheta: null, thetaFinal: null,
    deltaThetaValue: null, chisel: [],
  };
  badge: HolonomyBadge = {
    kind: null, trace: null, windingPrediction: null, fixedPoints: [],
  };

  lastTraceText: string | null = null;
  lastHolonomyText: string | null = null;
  lastHolonomyRequestBody: string | null = null;

  private readonly client: EngineClient;
  private readonly throttleMs: number;
  private readonly minSpacing: number;
  private readonly closeRadius: number;
  private readonly samples: number;

  private gesture: PointerSample[] | null = null;
  private revision = 0;
  private appliedRevision = -1;
  /** all engine calls currently outstanding (readouts, holonomy) */
  private requestsOutstanding = 0;
  /** single in-flight guard for the live readout channel */
  private readoutBusy = false;
  private pending = false;
  private timerSet = false;
  private lastSendAt = -Infinity;

  constructor(opts: SessionOptions) {
    this.client = opts.client;
    this.ell = opts.ell;
    this.theta0 = opts.theta0;
    this.throttleMs = opts.throttleMs ?? 100;
    this.minSpacing = (opts.minSpacingFactor ?? 1 / 100) * this.ell;
    this.closeRadius = (opts.closeRadiusFactor ?? 1 / 25) * this.ell;
    this.samples = opts.samples ?? 256;
  }

  pointer(sample: PointerSample): void {
    if (sample.kind === "down") {
      this.gesture = [sample];
      this.closedPath = null;
      this.badge = { kind: null, trace: null, windingPrediction: null, fixedPoints: [] };
      this.liveVertices = [{ x: sample.x, y: sample.y }];
      this.revision += 1;
      this.requestReadout();
      return;
    }
    if (this.gesture === null) {
      return; // stray move/up without a down
    }
    this.gesture.push(sample);
    if (sample.kind === "move") {
      const last = this.liveVertices[this.liveVertices.length - 1]!;
      if (Math.hypot(sample.x - last.x, sample.y - last.y) >= this.minSpacing) {
        this.liveVertices.push({ x: sample.x, y: sample.y });
        this.revision += 1;
        this.requestReadout();
      }
      return;
    }
    this.finishGesture();
  }

  private finishGesture(): void {
    const result = capturePath(this.gesture!, {
      minSpacing: this.minSpacing,
      closeRadius: this.closeRadius,
    });
    this.gesture = null;
    if (result.path === null) {
      this.notices.push(result.notice ?? "trace discarded");
      this.liveVertices = [];
      return;
    }
    this.liveVertices = result.path.vertices;
    this.revision += 1;
    if (result.path.closed) {
      this.closedPath = result.path;
      void this.sendTrace(this.revision, result.path);
      void this.requestHolonomy(result.path);
    } else {
      void this.sendTrace(this.revision, result.path);
    }
  }

  /** throttled live /trace on the path-so-far (full path every time) */
  private requestReadout(): void {
    if (this.gesture === null || this.liveVertices.length < 2) {
      return;
    }
    if (this.readoutBusy) {
      this.pending = true;
      return;
    }
    const wait = this.lastSendAt + this.throttleMs - Date.now();
    if (wait > 0) {
      if (!this.timerSet) {
        this.timerSet = true;
        setTimeout(() => {
          this.timerSet = false;
          this.requestReadout();
        }, wait);
      }
      return;
    }
    void this.sendTrace(this.revision, { closed: false, vertices: this.liveVertices });
  }

  private async sendTrace(revision: number, path: CapturedPath): Promise<void> {
    this.readoutBusy = true;
    this.requestsOutstanding += 1;
    this.lastSendAt = Date.now();
    const body = `{"path":${pathToJson(path)},"theta0":${this.theta0},` +
      `"ell":${this.ell},"samples":${this.samples}}`;
    let reachable = false;
    try {
      const resp = await this.client.post("/trace", body);
      reachable = true;
      this.engineDown = false;
      if (resp.status === 200 && revision > this.appliedRevision) {
        this.appliedRevision = revision;
        this.applyTrace(resp.text);
      }
    } catch {
      this.engineDown = true; // banner; input capture continues
    } finally {
      this.requestsOutstanding -= 1;
      this.readoutBusy = false;
      const catchUp = this.pending || this.revision > this.appliedRevision;
      this.pending = false;
      // never auto-retry a dead engine: the next pointer event retries
      if (reachable && catchUp) {
        this.requestReadout();
      }
    }
  }

  private applyTrace(text: string): void {
    this.lastTraceText = text;
    this.readout.reading = extractRawNumber(text, "reading");
    this.readout.sigma = extractRawNumber(text, "sigma");
    this.readout.deltaTheta = extractRawNumber(text, "delta_theta");
    this.readout.thetaFinal = extractRawNumber(text, "theta_final");
    this.readout.deltaThetaValue =
      this.readout.deltaTheta === null ? null : Number(this.readout.deltaTheta);
    this.readout.chisel = parsePairs(text, "chisel");
  }

  private async requestHolonomy(path: CapturedPath): Promise<void> {
    const body = `{"path":${pathToJson(path)},"ell":${this.ell}}`;
    this.lastHolonomyRequestBody = body;
    this.requestsOutstanding += 1;
    try {
      const resp = await this.client.post("/holonomy", body);
      this.engineDown = false;
      if (resp.status !== 200) {
        this.notices.push(`holonomy request failed (${resp.status})`);
        return;
      }
      this.lastHolonomyText = resp.text;
      this.badge.kind = extractRawString(resp.text, "kind");
      this.badge.trace = extractRawNumber(resp.text, "trace");
      this.badge.windingPrediction = extractRawNumber(resp.text, "winding_prediction");
      this.badge.fixedPoints = parsePairs(resp.text, "fixed_points");
    } catch {
      this.engineDown = true;
    } finally {
      this.requestsOutstanding -= 1;
    }
  }

  /** /estimate with alternate parameters for the side-by-side panel */
  async whatIf(alt: { theta0?: number; ell?: number; baseIndex?: number;
                      base?: Pt } = {}): Promise<WhatIfView> {
    if (this.closedPath === null) {
      throw new Error("what-if needs a completed closed loop");
    }
    const theta0 = alt.theta0 ?? this.theta0;
    const ell = alt.ell ?? this.ell;
    const baseIndex = alt.baseIndex ?? this.baseIndex;
    const basePart = alt.base ? `,"base":[${alt.base.x},${alt.base.y}]` : "";
    const body = `{"path":${pathToJson(this.closedPath)},"theta0":${theta0},` +
      `"ell":${ell},"base_index":${baseIndex}${basePart}}`;
    const resp = await this.client.post("/estimate", body);
    if (resp.status !== 200) {
      throw new Error(`estimate failed (${resp.status}): ${resp.text}`);
    }
    return {
      requestBody: body,
      responseText: resp.text,
      reading: extractRawNumber(resp.text, "reading"),
      readingOpposite: extractRawNumber(resp.text, "reading_opposite"),
      averagedReading: extractRawNumber(resp.text, "averaged_reading"),
      predicted: extractRawNumber(resp.text, "ell_sigma_predicted"),
      averagedPredicted: extractRawNumber(resp.text, "averaged_predicted"),
      area: extractRawNumber(resp.text, "area"),
    };
  }

  async checkHealth(): Promise<void> {
    this.engineDown = !(await this.client.health());
  }

  /** resolves once no request is in flight and nothing is queued */
  async idle(): Promise<void> {
    while (this.requestsOutstanding > 0 || this.timerSet || this.pending) {
      await new Promise((resolve) => setTimeout(resolve, 5));
    }
  }
}

/** parse [[x, y], ...] under a key; rendering-only (markers, curves) */
function parsePairs(json: string, key: string): Pt[] {
  const m = json.match(new RegExp(`"${key}":\\[(.*?)\\](?=,"|}$|})`));
  if (!m) {
    return [];
  }
  const pairs = m[1]!.match(/\[[^\]]*\]/g) ?? [];
  return pairs.map((pair) => {
    const nums = pair.slice(1, -1).split(",").map(Number);
    return { x: nums[0] ?? 0, y: nums[1] ?? 0 };
  });
}

export { decimate };
