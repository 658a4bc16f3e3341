/**
 * Turns pointer gestures into force samples for the gateway.
 *
 * The default binding is hold-and-drag: press the on-screen key, drag
 * vertically, and the drag distance maps linearly onto newtons. Hardware
 * pointer pressure and wheel modulation are available as alternatives for
 * devices that report them. Samples land on a fixed grid at the sample
 * rate; timestamps are integers and strictly increase. Release emits a
 * zero-force sample within one sample period and nothing afterwards: the
 * gateway, not the UI, decides what a release means.
 */
import { sampleMessage, type WireSample } from "./protocol.js";

export interface Calibration {
  /** force at full deflection; the gateway clamps apexes at this ceiling */
  fullScaleN: number;
  /** vertical drag in CSS pixels that reaches full scale */
  dragRangePx: number;
  /** wheel travel in pixels that reaches full scale */
  wheelRangePx: number;
}

export const DEFAULT_CALIBRATION: Calibration = {
  fullScaleN: 3.0,
  dragRangePx: 240,
  wheelRangePx: 960,
};

function clampForce(n: number, cal: Calibration): number {
  if (!Number.isFinite(n) || n <= 0) {
    return 0;
  }
  return Math.min(n, cal.fullScaleN);
}

/** Downward drag distance in px, negative values (upward) read as zero. */
export function dragToForce(dragPx: number, cal: Calibration = DEFAULT_CALIBRATION): number {
  return clampForce((dragPx / cal.dragRangePx) * cal.fullScaleN, cal);
}

/** PointerEvent.pressure is already normalized to [0, 1]. */
export function pressureToForce(pressure: number, cal: Calibration = DEFAULT_CALIBRATION): number {
  return clampForce(pressure * cal.fullScaleN, cal);
}

export function wheelToForce(accumPx: number, cal: Calibration = DEFAULT_CALIBRATION): number {
  return clampForce((accumPx / cal.wheelRangePx) * cal.fullScaleN, cal);
}

export class HoldAndDragCapture {
  readonly key: string;
  readonly cal: Calibration;
  private readonly periodMs: number;
  private startMs: number | null = null;
  private emitted = 0;
  private force = 0;

  constructor(key: string, sampleRateHz = 100, cal: Calibration = DEFAULT_CALIBRATION) {
    if (!(sampleRateHz > 0) || sampleRateHz > 1000) {
      throw new Error(`sampleRateHz must be in (0, 1000], got ${sampleRateHz}`);
    }
    this.key = key;
    this.cal = cal;
    this.periodMs = 1000 / sampleRateHz;
  }

  get active(): boolean {
    return this.startMs !== null;
  }

  get currentForce(): number {
    return this.force;
  }

  /** Starts the hold; the first sample is stamped at the press instant. */
  begin(nowMs: number): WireSample[] {
    if (this.startMs !== null) {
      return [];
    }
    this.startMs = Math.round(nowMs);
    this.emitted = 0;
    this.force = 0;
    return this.collect(nowMs);
  }

  setDrag(dragPx: number): void {
    if (this.startMs !== null) {
      this.force = dragToForce(dragPx, this.cal);
    }
  }

  setForce(forceN: number): void {
    if (this.startMs !== null) {
      this.force = clampForce(forceN, this.cal);
    }
  }

  /** All grid samples due by nowMs, at the current force. Call from the frame loop. */
  collect(nowMs: number): WireSample[] {
    if (this.startMs === null) {
      return [];
    }
    const out: WireSample[] = [];
    while (this.gridTime(this.emitted) <= nowMs) {
      out.push(sampleMessage(this.key, this.gridTime(this.emitted), this.force));
      this.emitted += 1;
    }
    return out;
  }

  /**
   * Ends the hold. Emits any samples still due, then exactly one zero-force
   * sample at the next grid slot, so the stream shows the drop within one
   * sample period.
   */
  release(nowMs: number): WireSample[] {
    if (this.startMs === null) {
      return [];
    }
    const out = this.collect(nowMs);
    out.push(sampleMessage(this.key, this.gridTime(this.emitted), 0));
    this.startMs = null;
    this.emitted = 0;
    this.force = 0;
    return out;
  }

  private gridTime(index: number): number {
    if (this.startMs === null) {
      throw new Error("capture is not active");
    }
    return this.startMs + Math.round(index * this.periodMs);
  }
}
