import { describe, expect, it } from "vitest";
import path from "node:path";

import {
  advanceTutorial,
  currentStage,
  startTutorial,
  tutorialDone,
  TUTORIAL_STAGES,
} from "../src/tutorial.js";
import { parseServerLine, type ParsedLine } from "../src/protocol.js";
import { FIXTURE_DIR, parseFixtureLines } from "./helpers.js";

const TARGET = "canal-winter";

function commit(optionId: string): ParsedLine {
  return parseServerLine(
    JSON.stringify({ type: "directive", kind: "CommitOutput", t_ms: 1, option_id: optionId, label: optionId }),
  );
}

function fold(lines: ParsedLine[], start = startTutorial(TARGET)) {
  return lines.reduce(advanceTutorial, start);
}

describe("tutorial ladder", () => {
  it("defines four stages ending at the named target", () => {
    expect(TUTORIAL_STAGES).toHaveLength(4);
    expect(TUTORIAL_STAGES.map((s) => s.id)).toEqual(["navigate", "preview", "commit", "target"]);
  });

  it("climbs navigate, preview, and commit during one successful attempt", () => {
    const progress = fold(parseFixtureLines(path.join(FIXTURE_DIR, "perfect_attempt.wire.jsonl")));
    expect(progress.stage).toBe(3);
    expect(currentStage(progress)!.id).toBe("target");
    expect(tutorialDone(progress)).toBe(false);
  });

  it("finishes after a second attempt that commits the target", () => {
    const lines = parseFixtureLines(path.join(FIXTURE_DIR, "perfect_attempt.wire.jsonl"));
    const progress = fold(lines.concat(lines));
    expect(tutorialDone(progress)).toBe(true);
    expect(currentStage(progress)).toBeNull();
  });

  it("does not let a later skill skip an earlier stage", () => {
    const progress = fold([commit(TARGET)]);
    expect(progress.stage).toBe(0);
    expect(currentStage(progress)!.id).toBe("navigate");
  });

  it("only advances one stage per directive even when several would match", () => {
    const highlight = parseServerLine(
      '{"type":"directive","kind":"Highlight","t_ms":1,"index":1,"option_id":"a","label":"a"}',
    );
    const progress = fold([highlight, highlight]);
    expect(progress.stage).toBe(1);
  });

  it("holds the target stage until the right option commits", () => {
    const atTarget = { stage: 3, targetId: TARGET };
    expect(advanceTutorial(atTarget, commit("canal-map")).stage).toBe(3);
    expect(advanceTutorial(atTarget, commit(TARGET)).stage).toBe(4);
  });

  it("ignores events, errors, and anything after completion", () => {
    const done = { stage: 4, targetId: TARGET };
    expect(advanceTutorial(done, commit(TARGET))).toEqual(done);
    const start = startTutorial(TARGET);
    const event = parseServerLine('{"type":"event","t_ms":1,"key":"space","kind":"OnePressEnter"}');
    expect(advanceTutorial(start, event).stage).toBe(0);
  });
});
