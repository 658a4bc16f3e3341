import { describe, expect, it } from "vitest";

import {
  DEFAULT_CALIBRATION,
  dragToForce,
  HoldAndDragCapture,
  pressureToForce,
  wheelToForce,
} from "../src/capture.js";
import type { WireSample } from "../src/protocol.js";

describe("force bindings", () => {
  it("maps drag distance linearly and clamps at the calibration limits", () => {
    expect(dragToForce(0)).toBe(0);
    expect(dragToForce(120)).toBeCloseTo(1.5);
    expect(dragToForce(240)).toBe(3.0);
    expect(dragToForce(1000)).toBe(3.0);
    expect(dragToForce(-50)).toBe(0);
  });

  it("respects a custom drag range", () => {
    const cal = { ...DEFAULT_CALIBRATION, dragRangePx: 100 };
    expect(dragToForce(50, cal)).toBeCloseTo(1.5);
  });

  it("maps normalized pointer pressure onto the full force range", () => {
    expect(pressureToForce(0)).toBe(0);
    expect(pressureToForce(0.5)).toBeCloseTo(1.5);
    expect(pressureToForce(1)).toBe(3.0);
  });

  it("maps wheel travel like drag but over a longer throw", () => {
    expect(wheelToForce(480)).toBeCloseTo(1.5);
    expect(wheelToForce(-10)).toBe(0);
  });
});

describe("HoldAndDragCapture", () => {
  it("emits nothing before the hold begins", () => {
    const cap = new HoldAndDragCapture("space");
    expect(cap.active).toBe(false);
    expect(cap.collect(500)).toEqual([]);
    expect(cap.release(500)).toEqual([]);
  });

  it("stamps the first sample at the press instant", () => {
    const cap = new HoldAndDragCapture("space");
    const first = cap.begin(1000);
    expect(first).toEqual([{ type: "sample", key: "space", t_ms: 1000, force_n: 0 }]);
  });

  it("emits on a strict 10 ms grid at 100 Hz", () => {
    const cap = new HoldAndDragCapture("space");
    const all = [...cap.begin(1000), ...cap.collect(1055)];
    expect(all.map((s) => s.t_ms)).toEqual([1000, 1010, 1020, 1030, 1040, 1050]);
  });

  it("keeps timestamps strictly increasing across uneven frame times", () => {
    const cap = new HoldAndDragCapture("space");
    const out: WireSample[] = [...cap.begin(0)];
    for (const now of [3, 17, 17, 18, 52, 99, 100, 133]) {
      out.push(...cap.collect(now));
    }
    out.push(...cap.release(140));
    const times = out.map((s) => s.t_ms);
    for (let i = 1; i < times.length; i += 1) {
      expect(times[i]!).toBeGreaterThan(times[i - 1]!);
    }
  });

  it("samples the drag force current at collection time", () => {
    const cap = new HoldAndDragCapture("space");
    cap.begin(0);
    cap.setDrag(120);
    const mid = cap.collect(30);
    expect(mid.every((s) => Math.abs(s.force_n - 1.5) < 1e-9)).toBe(true);
    cap.setDrag(240);
    const late = cap.collect(50);
    expect(late.every((s) => s.force_n === 3.0)).toBe(true);
  });

  it("drives force to zero within one sample period on release", () => {
    const cap = new HoldAndDragCapture("space");
    cap.begin(0);
    cap.setDrag(200);
    const held = cap.collect(95);
    const tail = cap.release(95);
    const last = tail[tail.length - 1]!;
    expect(last.force_n).toBe(0);
    const lastHeld = held[held.length - 1]!;
    expect(last.t_ms - lastHeld.t_ms).toBeLessThanOrEqual(10);
    expect(cap.active).toBe(false);
    expect(cap.collect(200)).toEqual([]);
  });

  it("ignores a second begin while active", () => {
    const cap = new HoldAndDragCapture("space");
    cap.begin(0);
    expect(cap.begin(50)).toEqual([]);
  });

  it("is deterministic for a scripted gesture", () => {
    const run = (): WireSample[] => {
      const cap = new HoldAndDragCapture("space");
      const out = [...cap.begin(0)];
      cap.setDrag(64);
      out.push(...cap.collect(700));
      cap.setDrag(128);
      out.push(...cap.collect(760));
      cap.setDrag(64);
      out.push(...cap.collect(1200));
      out.push(...cap.release(1200));
      return out;
    };
    expect(run()).toEqual(run());
  });

  it("supports other sample rates", () => {
    const cap = new HoldAndDragCapture("space", 50);
    const all = [...cap.begin(0), ...cap.collect(65)];
    expect(all.map((s) => s.t_ms)).toEqual([0, 20, 40, 60]);
  });

  it("rejects unusable sample rates", () => {
    expect(() => new HoldAndDragCapture("space", 0)).toThrow(/sampleRateHz/);
    expect(() => new HoldAndDragCapture("space", 4000)).toThrow(/sampleRateHz/);
  });
});
