/**
 * Rolling force trace. The model keeps the last few seconds of samples and
 * event markers and exposes pure pixel mapping, so the geometry is testable
 * without a canvas; `drawSparkline` is the only code that touches one.
 *
 * Guide lines mark the force bands the detector cares about: contact floor,
 * medium apex, hard apex, and the clamp ceiling.
 */

export interface TracePoint {
  tMs: number;
  forceN: number;
}

export interface TraceMarker {
  tMs: number;
  kind: string;
}

export const GUIDE_LINES_N = [0.6, 1.2, 2.0, 3.0] as const;

export class SparklineModel {
  readonly windowMs: number;
  readonly maxForceN: number;
  private points: TracePoint[] = [];
  private markers: TraceMarker[] = [];

  constructor(windowMs = 5000, maxForceN = 3.2) {
    this.windowMs = windowMs;
    this.maxForceN = maxForceN;
  }

  push(tMs: number, forceN: number): void {
    this.points.push({ tMs, forceN });
    this.evict(tMs);
  }

  mark(tMs: number, kind: string): void {
    this.markers.push({ tMs, kind });
    this.evict(tMs);
  }

  private evict(nowMs: number): void {
    const cutoff = nowMs - this.windowMs;
    while (this.points.length > 0 && this.points[0]!.tMs < cutoff) {
      this.points.shift();
    }
    while (this.markers.length > 0 && this.markers[0]!.tMs < cutoff) {
      this.markers.shift();
    }
  }

  get trace(): readonly TracePoint[] {
    return this.points;
  }

  get eventMarkers(): readonly TraceMarker[] {
    return this.markers;
  }

  get latestT(): number | null {
    return this.points.length > 0 ? this.points[this.points.length - 1]!.tMs : null;
  }

  /** Maps a timestamp to [0, width]; the right edge is the newest sample. */
  xFor(tMs: number, width: number): number {
    const right = this.latestT ?? tMs;
    const frac = 1 - (right - tMs) / this.windowMs;
    return Math.max(0, Math.min(width, frac * width));
  }

  /** Maps newtons to [0, height] with 0 N at the bottom. */
  yFor(forceN: number, height: number): number {
    const frac = Math.max(0, Math.min(1, forceN / this.maxForceN));
    return height - frac * height;
  }
}

export function drawSparkline(
  ctx: CanvasRenderingContext2D,
  model: SparklineModel,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.save();

  ctx.strokeStyle = "#3a4a5a";
  ctx.fillStyle = "#6a7a8a";
  ctx.font = "10px monospace";
  ctx.lineWidth = 1;
  for (const level of GUIDE_LINES_N) {
    const y = model.yFor(level, height);
    ctx.beginPath();
    ctx.setLineDash([4, 4]);
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
    ctx.stroke();
    ctx.fillText(`${level.toFixed(1)} N`, 4, y - 2);
  }
  ctx.setLineDash([]);

  const trace = model.trace;
  if (trace.length > 1) {
    ctx.strokeStyle = "#5ad1a5";
    ctx.lineWidth = 2;
    ctx.beginPath();
    trace.forEach((p, i) => {
      const x = model.xFor(p.tMs, width);
      const y = model.yFor(p.forceN, height);
      if (i === 0) {
        ctx.moveTo(x, y);
      } else {
        ctx.lineTo(x, y);
      }
    });
    ctx.stroke();
  }

  ctx.strokeStyle = "#e0b05a";
  for (const m of model.eventMarkers) {
    const x = model.xFor(m.tMs, width);
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
  }

  ctx.restore();
}
