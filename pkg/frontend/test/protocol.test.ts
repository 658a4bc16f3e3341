import { describe, expect, it } from "vitest";
import path from "node:path";

import {
  LineSplitter,
  parseServerLine,
  sampleMessage,
  serializeClientMessage,
} from "../src/protocol.js";
import { FIXTURE_DIR, readJsonl } from "./helpers.js";

describe("parseServerLine", () => {
  it("recognizes every line of the recorded wire logs", () => {
    for (const name of ["perfect_attempt", "three_event"]) {
      const lines = readJsonl(path.join(FIXTURE_DIR, `${name}.wire.jsonl`));
      expect(lines.length).toBeGreaterThan(0);
      for (const raw of lines) {
        const parsed = parseServerLine(raw);
        expect(parsed.type, raw).not.toBe("unknown");
      }
    }
  });

  it("keeps the raw text of lines that do not parse", () => {
    const parsed = parseServerLine("{not json");
    expect(parsed).toEqual({ type: "unknown", raw: "{not json" });
  });

  it("treats non-objects and foreign types as unknown", () => {
    expect(parseServerLine("[1,2,3]").type).toBe("unknown");
    expect(parseServerLine("42").type).toBe("unknown");
    expect(parseServerLine("null").type).toBe("unknown");
    expect(parseServerLine('{"type":"telemetry","x":1}').type).toBe("unknown");
    expect(parseServerLine('{"kind":"ShowMenu"}').type).toBe("unknown");
  });

  it("passes event fields through", () => {
    const parsed = parseServerLine('{"type":"event","t_ms":790,"key":"space","kind":"MediumRepeat","apex_n":1.5}');
    expect(parsed).toEqual({ type: "event", t_ms: 790, key: "space", kind: "MediumRepeat", apex_n: 1.5 });
  });
});

describe("serializeClientMessage", () => {
  it("writes config overrides as the gateway expects them", () => {
    const line = serializeClientMessage({ type: "config", wytiwyg: { dwell_ms: 400 }, menu: "suggest10" });
    expect(JSON.parse(line)).toEqual({ type: "config", wytiwyg: { dwell_ms: 400 }, menu: "suggest10" });
  });

  it("round-trips samples", () => {
    const msg = sampleMessage("space", 120, 0.85);
    expect(JSON.parse(serializeClientMessage(msg))).toEqual({
      type: "sample",
      key: "space",
      t_ms: 120,
      force_n: 0.85,
    });
  });
});

describe("sampleMessage", () => {
  it("rejects fractional timestamps before they reach the wire", () => {
    expect(() => sampleMessage("space", 10.5, 1)).toThrow(/integer/);
  });
});

describe("LineSplitter", () => {
  it("reassembles lines across arbitrary chunk boundaries", () => {
    const splitter = new LineSplitter();
    expect(splitter.push('{"a":')).toEqual([]);
    expect(splitter.pending).toBe('{"a":');
    expect(splitter.push('1}\n{"b":2}\n{"c"')).toEqual(['{"a":1}', '{"b":2}']);
    expect(splitter.push(":3}\n")).toEqual(['{"c":3}']);
    expect(splitter.pending).toBe("");
  });

  it("drops blank lines", () => {
    const splitter = new LineSplitter();
    expect(splitter.push("\n\nx\n\n")).toEqual(["x"]);
  });
});
