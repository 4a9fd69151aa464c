import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { EngineClient, FetchLike } from "../src/client.js";
import { TracingSession } from "../src/session.js";

interface Call {
  url: string;
  body: string;
}

function makeFetch(handler: (call: Call, index: number) => string | Promise<string>) {
  const calls: Call[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    const call = { url, body: init?.body ?? "" };
    calls.push(call);
    const text = await handler(call, calls.length - 1);
    return { status: 200, text: async () => text };
  };
  return { calls, fetchFn };
}

function traceResponse(tag: number): string {
  return `{"reading":${tag},"sigma":0.5,"delta_theta":0.25,"theta_final":1.25,` +
    `"chisel":[[0,0],[0.1,0.1]]}`;
}

function session(fetchFn: FetchLike, throttleMs = 100): TracingSession {
  return new TracingSession({
    client: new EngineClient("http://engine", fetchFn),
    ell: 1.0,
    theta0: 0.5,
    throttleMs,
  });
}

describe("live readout", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("throttles /trace to at most one call per window, always full path", async () => {
    const { calls, fetchFn } = makeFetch((_c, i) => traceResponse(i));
    const s = session(fetchFn, 100);
    s.pointer({ x: 0, y: 0, kind: "down" });
    for (let i = 1; i <= 60; i++) {
      s.pointer({ x: i * 0.05, y: 0, kind: "move" });
      await vi.advanceTimersByTimeAsync(5); // 60 moves over 300 ms
    }
    await vi.runAllTimersAsync();
    const traceCalls = calls.filter((c) => c.url.endsWith("/trace"));
    // 300 ms at >= 100 ms spacing: at most ~4 sends plus the trailing one
    expect(traceCalls.length).toBeLessThanOrEqual(5);
    // every request carried the full path-so-far (stateless server)
    const lastBody = JSON.parse(traceCalls[traceCalls.length - 1]!.body);
    expect(lastBody.path.vertices.length).toBeGreaterThan(50);
    expect(lastBody.path.vertices[0]).toEqual([0, 0]);
  });

  it("applies only the newest revision and drops stale responses", async () => {
    const resolvers: ((text: string) => void)[] = [];
    const { calls, fetchFn } = makeFetch(
      () => new Promise<string>((resolve) => resolvers.push(resolve)));
    const s = session(fetchFn, 0);
    s.pointer({ x: 0, y: 0, kind: "down" });
    s.pointer({ x: 0.5, y: 0, kind: "move" }); // fires request 0 (in flight)
    s.pointer({ x: 1.0, y: 0, kind: "move" }); // queued as pending
    expect(calls.length).toBe(1);
    resolvers[0]!(traceResponse(0));
    await vi.runAllTimersAsync();
    expect(calls.length).toBe(2); // pending revision fired after settle
    resolvers[1]!(traceResponse(1));
    await vi.runAllTimersAsync();
    expect(s.readout.reading).toBe("1"); // newest response displayed
  });

  it("raises the banner when the engine is down but keeps capturing", async () => {
    const fetchFn: FetchLike = async () => {
      throw new Error("connection refused");
    };
    const s = session(fetchFn, 0);
    s.pointer({ x: 0, y: 0, kind: "down" });
    s.pointer({ x: 0.5, y: 0, kind: "move" });
    await vi.runAllTimersAsync();
    expect(s.engineDown).toBe(true);
    s.pointer({ x: 1.0, y: 0, kind: "move" });
    expect(s.liveVertices.length).toBe(3); // input still captured
  });

  it("readout tokens come from the response text verbatim", async () => {
    const { fetchFn } = makeFetch(() =>
      '{"reading":0.10000000000000001,"sigma":0.2,"delta_theta":0.3,' +
      '"theta_final":0.8,"chisel":[[0,0]]}');
    const s = session(fetchFn, 0);
    s.pointer({ x: 0, y: 0, kind: "down" });
    s.pointer({ x: 1, y: 0, kind: "move" });
    await vi.runAllTimersAsync();
    expect(s.readout.reading).toBe("0.10000000000000001");
  });
});

describe("gestures", () => {
  it("discards a two-sample gesture with a notice", () => {
    const { calls, fetchFn } = makeFetch(() => traceResponse(0));
    const s = session(fetchFn);
    s.pointer({ x: 0, y: 0, kind: "down" });
    s.pointer({ x: 0.001, y: 0, kind: "up" });
    expect(s.notices[s.notices.length - 1]).toMatch(/discard/);
    expect(s.liveVertices.length).toBe(0);
    expect(calls.filter((c) => c.url.endsWith("/holonomy")).length).toBe(0);
  });

  it("requests holonomy once a loop closes", async () => {
    const { calls, fetchFn } = makeFetch((call) =>
      call.url.endsWith("/holonomy")
        ? '{"trace":-5.5,"classification":{"kind":"Hyperbolic","trace":-5.5,' +
          '"fixed_points":[[0.6,0.8],[0.8,0.6]],"multipliers":[0.1,10.0]},' +
          '"winding_prediction":1}'
        : traceResponse(9));
    const s = session(fetchFn, 0);
    s.pointer({ x: 0, y: 0, kind: "down" });
    for (const [x, y] of [[2, 0], [2, 2], [0, 2]] as const) {
      s.pointer({ x, y, kind: "move" });
    }
    s.pointer({ x: 0.01, y: 0.01, kind: "up" }); // near the start: closes
    await s.idle();
    expect(s.closedPath).not.toBeNull();
    expect(s.closedPath!.closed).toBe(true);
    expect(s.badge.kind).toBe("Hyperbolic");
    expect(s.badge.trace).toBe("-5.5");
    expect(s.badge.fixedPoints).toEqual([{ x: 0.6, y: 0.8 }, { x: 0.8, y: 0.6 }]);
    expect(calls.some((c) => c.url.endsWith("/holonomy"))).toBe(true);
  });
});

describe("what-if", () => {
  it("requires a completed closed loop", async () => {
    const { fetchFn } = makeFetch(() => traceResponse(0));
    const s = session(fetchFn);
    await expect(s.whatIf({ theta0: 1.0 })).rejects.toThrow(/closed loop/);
  });

  it("exposes the averaged value verbatim from /estimate", async () => {
    const estimate = '{"reading":0.26,"reading_opposite":0.24,' +
      '"averaged_reading":0.25000000000000006,"prediction":' +
      '{"ell_sigma_predicted":0.251,"averaged_predicted":0.252},"area":0.25}';
    const { calls, fetchFn } = makeFetch((call) =>
      call.url.endsWith("/estimate") ? estimate : traceResponse(0));
    const s = session(fetchFn, 0);
    s.pointer({ x: 0, y: 0, kind: "down" });
    for (const [x, y] of [[0.5, 0], [0.5, 0.5], [0, 0.5]] as const) {
      s.pointer({ x, y, kind: "move" });
    }
    s.pointer({ x: 0.005, y: 0, kind: "up" });
    await s.idle();
    const view = await s.whatIf({ theta0: 2.0, ell: 1.5 });
    expect(view.averagedReading).toBe("0.25000000000000006");
    const body = JSON.parse(
      calls.filter((c) => c.url.endsWith("/estimate"))[0]!.body);
    expect(body.theta0).toBe(2.0);
    expect(body.ell).toBe(1.5);
  });
});
