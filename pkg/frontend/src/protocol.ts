/**
 * Wire protocol for the onepress gateway: newline-delimited JSON both ways.
 *
 * The client opens with a `config` line, streams `sample` lines with
 * strictly increasing per-key timestamps, and finishes with `end`. The
 * gateway replies with `ready`, then interleaved `event` and `directive`
 * lines, `error` lines for rejected input, and a single `done` after `end`.
 */

export interface WireSample {
  type: "sample";
  key: string;
  t_ms: number;
  force_n: number;
}

export interface ConfigOverrides {
  detector?: Record<string, number>;
  wytiwyg?: Record<string, number>;
  /** id of a menu fixture packaged with the gateway, e.g. "suggest10" */
  menu?: string;
}

export interface WireConfig extends ConfigOverrides {
  type: "config";
}

export interface WireEnd {
  type: "end";
}

export type ClientMessage = WireConfig | WireSample | WireEnd;

export type EventKind =
  | "ClassicalDepress"
  | "ClassicalRelease"
  | "OnePressEnter"
  | "MediumRepeat"
  | "HardRepeat"
  | "OnePressRelease";

export interface WireEvent {
  type: "event";
  t_ms: number;
  key: string;
  kind: EventKind;
  apex_n?: number;
}

export interface MenuEntry {
  id: string;
  label: string;
}

export interface WireDirective {
  type: "directive";
  kind: string;
  t_ms: number;
  index?: number;
  option_id?: string;
  label?: string;
  contrast?: number;
  preview?: string;
  overlay?: string;
  reason?: string;
  options?: MenuEntry[];
}

export interface WireReady {
  type: "ready";
}

export interface WireDone {
  type: "done";
}

export interface WireError {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage = WireReady | WireDone | WireError | WireEvent | WireDirective;

/** A line the UI could not make sense of; kept so it can be surfaced, never acted on. */
export interface UnknownLine {
  type: "unknown";
  raw: string;
}

export type ParsedLine = ServerMessage | UnknownLine;

const SERVER_TYPES = new Set(["ready", "done", "error", "event", "directive"]);

export function parseServerLine(line: string): ParsedLine {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    return { type: "unknown", raw: line };
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    return { type: "unknown", raw: line };
  }
  const rec = obj as Record<string, unknown>;
  if (typeof rec.type !== "string" || !SERVER_TYPES.has(rec.type)) {
    return { type: "unknown", raw: line };
  }
  return rec as unknown as ServerMessage;
}

export function serializeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function sampleMessage(key: string, tMs: number, forceN: number): WireSample {
  if (!Number.isInteger(tMs)) {
    throw new Error(`sample t_ms must be an integer, got ${tMs}`);
  }
  return { type: "sample", key, t_ms: tMs, force_n: forceN };
}

/**
 * Splits a byte stream into complete lines. Feed arbitrary chunks; whole
 * lines come back in order, a trailing partial line stays buffered.
 */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((p) => p.length > 0);
  }

  /** Any buffered partial line, without consuming it. */
  get pending(): string {
    return this.buffer;
  }
}
