// DOM wiring: pointer events -> session, session -> canvas/readout panels.

import { EngineClient } from "./client.js";
import { TracingSession } from "./session.js";
import { drawDial, drawScene, screenToWorld, Viewport } from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function text(id: string, value: string | null): void {
  el<HTMLElement>(id).textContent = value ?? "—";
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("canvas");
  const dial = el<HTMLCanvasElement>("dial");
  const ctx = canvas.getContext("2d")!;
  const dialCtx = dial.getContext("2d")!;

  const engineUrl = el<HTMLInputElement>("engine-url");
  const ellInput = el<HTMLInputElement>("ell");
  const thetaInput = el<HTMLInputElement>("theta0");
  const banner = el<HTMLElement>("banner");

  let session = makeSession();

  function makeSession(): TracingSession {
    const s = new TracingSession({
      client: new EngineClient(engineUrl.value),
      ell: Number(ellInput.value),
      theta0: Number(thetaInput.value),
    });
    void s.checkHealth().then(refresh);
    return s;
  }

  function viewport(): Viewport {
    return { width: canvas.width, height: canvas.height, ell: session.ell };
  }

  function refresh(): void {
    drawScene(ctx, session, viewport());
    drawDial(dialCtx, session, dial.width);
    text("readout-reading", session.readout.reading);
    text("readout-sigma", session.readout.sigma);
    text("readout-dtheta", session.readout.deltaTheta);
    text("badge-kind", session.badge.kind);
    text("badge-trace", session.badge.trace);
    text("badge-winding", session.badge.windingPrediction);
    banner.style.display = session.engineDown ? "block" : "none";
    const notice = session.notices[session.notices.length - 1];
    text("notice", notice ?? "");
  }

  let drawing = false;
  canvas.addEventListener("pointerdown", (ev) => {
    drawing = true;
    canvas.setPointerCapture(ev.pointerId);
    const p = screenToWorld({ x: ev.offsetX, y: ev.offsetY }, viewport());
    session.pointer({ ...p, kind: "down" });
    refresh();
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!drawing) {
      return;
    }
    const p = screenToWorld({ x: ev.offsetX, y: ev.offsetY }, viewport());
    session.pointer({ ...p, kind: "move" });
    refresh();
  });
  canvas.addEventListener("pointerup", (ev) => {
    drawing = false;
    const p = screenToWorld({ x: ev.offsetX, y: ev.offsetY }, viewport());
    session.pointer({ ...p, kind: "up" });
    void session.idle().then(refresh);
  });

  // periodic repaint so throttled responses appear without extra plumbing
  setInterval(refresh, 150);

  for (const input of [engineUrl, ellInput, thetaInput]) {
    input.addEventListener("change", () => {
      session = makeSession();
      refresh();
    });
  }

  el<HTMLButtonElement>("whatif-run").addEventListener("click", () => {
    const altTheta = Number(el<HTMLInputElement>("whatif-theta0").value);
    const altEll = Number(el<HTMLInputElement>("whatif-ell").value);
    void session.whatIf({ theta0: altTheta, ell: altEll }).then((view) => {
      text("whatif-reading", view.reading);
      text("whatif-opposite", view.readingOpposite);
      text("whatif-averaged", view.averagedReading);
      text("whatif-predicted", view.predicted);
      text("whatif-averaged-predicted", view.averagedPredicted);
      text("whatif-area", view.area);
    }).catch((err: unknown) => {
      text("notice", String(err));
    });
  });
}

window.addEventListener("DOMContentLoaded", main);
