/**
 * Gateway client over a pluggable line transport. The browser build talks
 * WebSocket to the bundled bridge (browsers cannot open raw TCP); tests
 * drive the same client over a plain socket. The client never interprets
 * server lines beyond parsing: consumers fold them into their own state.
 */
import {
  LineSplitter,
  parseServerLine,
  serializeClientMessage,
  type ClientMessage,
  type ConfigOverrides,
  type ParsedLine,
  type WireSample,
} from "./protocol.js";

export interface LineTransport {
  /** Sends one already-serialized line; the transport appends the newline. */
  sendLine(line: string): void;
  /** Raw inbound text chunks; line framing is the client's job. */
  onChunk(cb: (chunk: string) => void): void;
  onClose(cb: () => void): void;
  close(): void;
}

export class GatewayClient {
  private readonly transport: LineTransport;
  private readonly splitter = new LineSplitter();
  private readonly listeners: Array<(line: ParsedLine) => void> = [];
  private readonly closeListeners: Array<() => void> = [];
  private closed = false;

  constructor(transport: LineTransport) {
    this.transport = transport;
    transport.onChunk((chunk) => {
      for (const raw of this.splitter.push(chunk)) {
        const parsed = parseServerLine(raw);
        for (const cb of this.listeners) {
          cb(parsed);
        }
      }
    });
    transport.onClose(() => {
      this.closed = true;
      for (const cb of this.closeListeners) {
        cb();
      }
    });
  }

  get isClosed(): boolean {
    return this.closed;
  }

  onLine(cb: (line: ParsedLine) => void): void {
    this.listeners.push(cb);
  }

  onClose(cb: () => void): void {
    this.closeListeners.push(cb);
  }

  send(msg: ClientMessage): void {
    this.transport.sendLine(serializeClientMessage(msg));
  }

  configure(overrides: ConfigOverrides = {}): void {
    this.send({ type: "config", ...overrides });
  }

  sendSample(sample: WireSample): void {
    this.send(sample);
  }

  end(): void {
    this.send({ type: "end" });
  }

  close(): void {
    this.transport.close();
  }
}

/** Browser transport: one WebSocket message per line, both directions. */
export function webSocketTransport(url: string): Promise<LineTransport> {
  return new Promise((resolve, reject) => {
    const ws = new WebSocket(url);
    const chunkCbs: Array<(chunk: string) => void> = [];
    const closeCbs: Array<() => void> = [];
    ws.addEventListener("open", () => {
      resolve({
        sendLine(line) {
          ws.send(line);
        },
        onChunk(cb) {
          chunkCbs.push(cb);
        },
        onClose(cb) {
          closeCbs.push(cb);
        },
        close() {
          ws.close();
        },
      });
    });
    ws.addEventListener("message", (evt) => {
      const text = typeof evt.data === "string" ? evt.data : "";
      for (const cb of chunkCbs) {
        cb(text.endsWith("\n") ? text : text + "\n");
      }
    });
    ws.addEventListener("close", () => {
      for (const cb of closeCbs) {
        cb();
      }
    });
    ws.addEventListener("error", () => {
      reject(new Error(`could not open ${url}`));
      ws.close();
    });
  });
}
