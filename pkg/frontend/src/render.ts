// Canvas drawing. Purely presentational: everything drawn comes from the
// session's captured vertices and service-response payloads.

import { Pt } from "./geometry.js";
import { TracingSession } from "./session.js";

export const PIXELS_PER_ELL = 120; // ell rendered at a fixed pixel length

export interface Viewport {
  width: number;
  height: number;
  ell: number;
}

export function worldToScreen(p: Pt, vp: Viewport): Pt {
  const scale = PIXELS_PER_ELL / vp.ell;
  return { x: vp.width / 2 + p.x * scale, y: vp.height / 2 - p.y * scale };
}

export function screenToWorld(p: Pt, vp: Viewport): Pt {
  const scale = PIXELS_PER_ELL / vp.ell;
  return { x: (p.x - vp.width / 2) / scale, y: (vp.height / 2 - p.y) / scale };
}

function polyline(ctx: CanvasRenderingContext2D, pts: Pt[], vp: Viewport,
                  color: string, width = 1.5): void {
  if (pts.length < 2) {
    return;
  }
  ctx.beginPath();
  const first = worldToScreen(pts[0]!, vp);
  ctx.moveTo(first.x, first.y);
  for (const p of pts.slice(1)) {
    const q = worldToScreen(p, vp);
    ctx.lineTo(q.x, q.y);
  }
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.stroke();
}

export function drawScene(ctx: CanvasRenderingContext2D, session: TracingSession,
                          vp: Viewport): void {
  ctx.clearRect(0, 0, vp.width, vp.height);

  // light grid, one cell per ell
  ctx.strokeStyle = "#eee";
  ctx.lineWidth = 1;
  for (let gx = vp.width / 2 % PIXELS_PER_ELL; gx < vp.width; gx += PIXELS_PER_ELL) {
    ctx.beginPath();
    ctx.moveTo(gx, 0);
    ctx.lineTo(gx, vp.height);
    ctx.stroke();
  }
  for (let gy = vp.height / 2 % PIXELS_PER_ELL; gy < vp.height; gy += PIXELS_PER_ELL) {
    ctx.beginPath();
    ctx.moveTo(0, gy);
    ctx.lineTo(vp.width, gy);
    ctx.stroke();
  }

  const base = session.liveVertices[0];
  if (base !== undefined) {
    // initial circle of radius ell about the base
    const c = worldToScreen(base, vp);
    ctx.beginPath();
    ctx.arc(c.x, c.y, PIXELS_PER_ELL, 0, 2 * Math.PI);
    ctx.strokeStyle = "#bbb";
    ctx.setLineDash([4, 4]);
    ctx.stroke();
    ctx.setLineDash([]);

    // fixed-direction markers on the initial circle (hyperbolic badge)
    for (const z of session.badge.fixedPoints) {
      const m = worldToScreen(
        { x: base.x + session.ell * z.x, y: base.y + session.ell * z.y }, vp);
      ctx.beginPath();
      ctx.arc(m.x, m.y, 5, 0, 2 * Math.PI);
      ctx.fillStyle = "#d62728";
      ctx.fill();
    }
  }

  polyline(ctx, session.liveVertices, vp, "#1f77b4", 2);
  polyline(ctx, session.readout.chisel, vp, "#d62728", 1.5);
}

export function drawDial(ctx: CanvasRenderingContext2D, session: TracingSession,
                         size: number): void {
  ctx.clearRect(0, 0, size, size);
  const r = size / 2 - 4;
  ctx.beginPath();
  ctx.arc(size / 2, size / 2, r, 0, 2 * Math.PI);
  ctx.strokeStyle = "#888";
  ctx.stroke();
  const dtheta = session.readout.deltaThetaValue;
  if (dtheta === null) {
    return;
  }
  const angle = session.theta0 + dtheta; // continuous lift; needle shows theta
  ctx.beginPath();
  ctx.moveTo(size / 2, size / 2);
  ctx.lineTo(size / 2 + r * Math.cos(angle), size / 2 - r * Math.sin(angle));
  ctx.strokeStyle = "#1f77b4";
  ctx.lineWidth = 2;
  ctx.stroke();
}
