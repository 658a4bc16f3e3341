// Node-only plumbing shared by the test files: spawn a real gateway, open a
// TCP transport for GatewayClient, and load the committed golden fixtures.
import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { readFileSync } from "node:fs";
import net from "node:net";
import path from "node:path";
import { fileURLToPath } from "node:url";

import type { LineTransport } from "../src/client.js";
import {
  LineSplitter,
  parseServerLine,
  sampleMessage,
  type ParsedLine,
  type WireSample,
} from "../src/protocol.js";

export const REPO_ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");
export const GOLDEN_DIR = path.join(REPO_ROOT, "tests", "golden");
export const FIXTURE_DIR = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");

export interface RunningGateway {
  port: number;
  stop: () => void;
}

/** Spawns `python3 -m onepress serve --port 0` and waits for the bound port. */
export function startGateway(): Promise<RunningGateway> {
  const proc: ChildProcessWithoutNullStreams = spawn(
    "python3",
    ["-u", "-m", "onepress", "serve", "--port", "0"],
    { cwd: REPO_ROOT },
  );
  return new Promise((resolve, reject) => {
    let banner = "";
    const onData = (chunk: Buffer) => {
      banner += chunk.toString("utf-8");
      const line = banner.split("\n")[0];
      if (banner.includes("\n") && line !== undefined) {
        proc.stdout.off("data", onData);
        const port = Number(line.trim().split(":").pop());
        if (!Number.isInteger(port) || port <= 0) {
          reject(new Error(`could not parse port from banner: ${line}`));
          proc.kill();
          return;
        }
        resolve({ port, stop: () => proc.kill() });
      }
    };
    proc.stdout.on("data", onData);
    proc.on("error", reject);
    proc.on("exit", (code) => {
      if (code !== null && code !== 0) {
        reject(new Error(`gateway exited with code ${code}: ${banner}`));
      }
    });
  });
}

export function tcpTransport(port: number, host = "127.0.0.1"): Promise<LineTransport> {
  return new Promise((resolve, reject) => {
    const sock = net.createConnection({ host, port }, () => {
      resolve({
        sendLine(line) {
          sock.write(line + "\n");
        },
        onChunk(cb) {
          sock.on("data", (data) => cb(data.toString("utf-8")));
        },
        onClose(cb) {
          sock.on("close", cb);
        },
        close() {
          sock.end();
        },
      });
    });
    sock.on("error", reject);
  });
}

export function readTrace(name: string): WireSample[] {
  const text = readFileSync(path.join(GOLDEN_DIR, `${name}.trace.csv`), "utf-8");
  const lines = text.trim().split("\n");
  return lines.slice(1).map((line) => {
    const [t, key, force] = line.split(",");
    if (t === undefined || key === undefined || force === undefined) {
      throw new Error(`bad trace row: ${line}`);
    }
    return sampleMessage(key, Number(t), Number(force));
  });
}

export function readJsonl(filePath: string): string[] {
  return readFileSync(filePath, "utf-8")
    .split("\n")
    .filter((l) => l.length > 0);
}

export function goldenEvents(name: string): string[] {
  return readJsonl(path.join(GOLDEN_DIR, `${name}.events.jsonl`));
}

export function goldenDirectives(name: string): string[] {
  return readJsonl(path.join(GOLDEN_DIR, `${name}.directives.jsonl`));
}

export function parseFixtureLines(filePath: string): ParsedLine[] {
  return readJsonl(filePath).map(parseServerLine);
}

/**
 * Sends config + samples + end over a fresh connection and collects the raw
 * reply lines until the gateway reports done (or an error if it never does).
 */
export async function streamOverTcp(
  port: number,
  samples: WireSample[],
  config: Record<string, unknown> = {},
): Promise<string[]> {
  const transport = await tcpTransport(port);
  const splitter = new LineSplitter();
  const lines: string[] = [];
  const done = new Promise<string[]>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("timed out waiting for done")), 10_000);
    transport.onChunk((chunk) => {
      for (const line of splitter.push(chunk)) {
        lines.push(line);
        if (line === '{"type":"done"}') {
          clearTimeout(timer);
          transport.close();
          resolve(lines);
        }
      }
    });
    transport.onClose(() => {
      clearTimeout(timer);
      reject(new Error(`connection closed before done; got ${lines.length} lines`));
    });
  });
  transport.sendLine(JSON.stringify({ type: "config", ...config }));
  for (const s of samples) {
    transport.sendLine(JSON.stringify(s));
  }
  transport.sendLine('{"type":"end"}');
  return done;
}

/**
 * Drops the routing "type" field from a raw server line, textually, so the
 * remainder can be byte-compared against the golden event/directive files.
 * Re-serializing through JSON.stringify would not round-trip Python's float
 * formatting (3.0 vs 3), so the line text is never re-encoded.
 */
export function stripType(line: string, type: "event" | "directive"): string {
  const prefix = `{"type":"${type}",`;
  if (!line.startsWith(prefix)) {
    throw new Error(`expected a ${type} line, got: ${line}`);
  }
  return "{" + line.slice(prefix.length);
}
