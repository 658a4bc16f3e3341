/**
 * Guided practice ladder. Four stages, each adding one skill on top of the
 * previous ones: move the highlight, hold for a preview, commit anything,
 * then commit a named target. Progress is driven purely by the directive
 * stream, so the tracker works identically against a live gateway or a
 * recorded log.
 */
import type { ParsedLine } from "./protocol.js";

export interface TutorialStage {
  id: "navigate" | "preview" | "commit" | "target";
  title: string;
  goal: string;
}

export const TUTORIAL_STAGES: readonly TutorialStage[] = [
  {
    id: "navigate",
    title: "1. Navigate",
    goal: "Hold the key softly until the menu opens, then pulse to medium to move the highlight.",
  },
  {
    id: "preview",
    title: "2. Preview",
    goal: "Stop on an option and keep holding; the preview appears after the dwell.",
  },
  {
    id: "commit",
    title: "3. Commit",
    goal: "With a preview showing, press hard to commit it.",
  },
  {
    id: "target",
    title: "4. Hit the target",
    goal: "Commit the named target option, preview and all.",
  },
] as const;

export interface TutorialProgress {
  /** index into TUTORIAL_STAGES; equals the stage count once finished */
  stage: number;
  /** target option id for the final stage */
  targetId: string;
}

export function startTutorial(targetId: string): TutorialProgress {
  return { stage: 0, targetId };
}

export function tutorialDone(p: TutorialProgress): boolean {
  return p.stage >= TUTORIAL_STAGES.length;
}

export function currentStage(p: TutorialProgress): TutorialStage | null {
  return tutorialDone(p) ? null : TUTORIAL_STAGES[p.stage] ?? null;
}

function stageSatisfied(stage: TutorialStage, line: ParsedLine, targetId: string): boolean {
  if (line.type !== "directive") {
    return false;
  }
  switch (stage.id) {
    case "navigate":
      return line.kind === "Highlight";
    case "preview":
      return line.kind === "ShowPreview";
    case "commit":
      return line.kind === "CommitOutput";
    case "target":
      return line.kind === "CommitOutput" && line.option_id === targetId;
  }
}

/**
 * Folds one server line into the progress. Only the current stage can
 * complete; later skills demonstrated early do not skip the ladder.
 */
export function advanceTutorial(p: TutorialProgress, line: ParsedLine): TutorialProgress {
  const stage = currentStage(p);
  if (stage === null) {
    return p;
  }
  if (stageSatisfied(stage, line, p.targetId)) {
    return { ...p, stage: p.stage + 1 };
  }
  return p;
}
