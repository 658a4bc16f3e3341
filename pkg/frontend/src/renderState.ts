/**
 * Pure view-model reducer. Every server line folds into a RenderState and
 * the DOM layer just mirrors the latest state, so a recorded wire log can
 * be replayed headlessly and the resulting snapshots diffed against a live
 * run. Nothing in here touches the DOM, the clock, or the network.
 */
import type { MenuEntry, ParsedLine, WireDirective, WireEvent } from "./protocol.js";

export interface MenuView {
  options: MenuEntry[];
  /** 1-based highlighted row; 0 means open with nothing selected */
  cursor: number;
  highlightedId: string | null;
}

export interface PreviewView {
  optionId: string;
  label: string;
  overlay: string;
  /** opacity the pane renders at; the gateway dictates it */
  contrast: number;
  html: string;
}

export interface CommitView {
  optionId: string;
  label: string;
  html: string;
}

export interface TickerEntry {
  tMs: number;
  text: string;
}

export interface RenderState {
  ready: boolean;
  done: boolean;
  /** connection or protocol fault to show at the top of the page */
  banner: string | null;
  /** key currently held in one-press mode, if any */
  onePressKey: string | null;
  menu: MenuView | null;
  preview: PreviewView | null;
  committed: CommitView | null;
  /** transient nudge shown after a commit attempt with no preview */
  hint: string | null;
  ticker: TickerEntry[];
  /** count of lines that were ignored because the UI did not understand them */
  dropped: number;
}

export const TICKER_LIMIT = 50;

export function initialRenderState(): RenderState {
  return {
    ready: false,
    done: false,
    banner: null,
    onePressKey: null,
    menu: null,
    preview: null,
    committed: null,
    hint: null,
    ticker: [],
    dropped: 0,
  };
}

function pushTicker(state: RenderState, tMs: number, text: string): RenderState {
  const ticker = [...state.ticker, { tMs, text }];
  if (ticker.length > TICKER_LIMIT) {
    ticker.splice(0, ticker.length - TICKER_LIMIT);
  }
  return { ...state, ticker };
}

function describeEvent(ev: WireEvent): string {
  if (ev.apex_n !== undefined) {
    return `${ev.kind} ${ev.key} @${ev.t_ms}ms apex ${ev.apex_n.toFixed(2)}N`;
  }
  return `${ev.kind} ${ev.key} @${ev.t_ms}ms`;
}

function applyEvent(state: RenderState, ev: WireEvent): RenderState {
  let next = pushTicker(state, ev.t_ms, describeEvent(ev));
  if (ev.kind === "OnePressEnter") {
    next = { ...next, onePressKey: ev.key };
  } else if (ev.kind === "OnePressRelease" && next.onePressKey === ev.key) {
    next = { ...next, onePressKey: null };
  }
  return next;
}

function applyDirective(state: RenderState, d: WireDirective): RenderState {
  switch (d.kind) {
    case "ShowMenu":
      return {
        ...state,
        menu: { options: d.options ?? [], cursor: 0, highlightedId: null },
        preview: null,
        committed: null,
        hint: null,
      };
    case "Highlight": {
      if (state.menu === null || d.index === undefined) {
        return { ...state, dropped: state.dropped + 1 };
      }
      return {
        ...state,
        menu: { ...state.menu, cursor: d.index, highlightedId: d.option_id ?? null },
      };
    }
    case "ShowPreview": {
      if (d.option_id === undefined || d.preview === undefined) {
        return { ...state, dropped: state.dropped + 1 };
      }
      return {
        ...state,
        preview: {
          optionId: d.option_id,
          label: d.label ?? d.option_id,
          overlay: d.overlay ?? d.label ?? d.option_id,
          contrast: d.contrast ?? 1.0,
          html: d.preview,
        },
      };
    }
    case "HidePreview":
      return { ...state, preview: null };
    case "CommitOutput": {
      if (d.option_id === undefined) {
        return { ...state, dropped: state.dropped + 1 };
      }
      return {
        ...state,
        committed: { optionId: d.option_id, label: d.label ?? d.option_id, html: d.preview ?? "" },
        preview: null,
        hint: null,
      };
    }
    case "InvalidCommit":
      return pushTicker(
        { ...state, hint: "preview first: hold until the preview shows, then press hard" },
        d.t_ms,
        `InvalidCommit @${d.t_ms}ms`,
      );
    case "DismissAll":
      return { ...state, menu: null, preview: null, hint: null };
    case "Warning":
      return pushTicker(state, d.t_ms, `Warning @${d.t_ms}ms: ${d.reason ?? ""}`);
    default:
      return { ...state, dropped: state.dropped + 1 };
  }
}

/** Folds one parsed server line into the state. Unknown input is counted, never acted on. */
export function applyLine(state: RenderState, line: ParsedLine): RenderState {
  switch (line.type) {
    case "ready":
      return { ...state, ready: true };
    case "done":
      return { ...state, done: true };
    case "error":
      return { ...state, banner: `${line.code}: ${line.message}` };
    case "event":
      return applyEvent(state, line);
    case "directive":
      return applyDirective(state, line);
    case "unknown":
      return { ...state, dropped: state.dropped + 1 };
  }
}

export function applyLines(state: RenderState, lines: Iterable<ParsedLine>): RenderState {
  let current = state;
  for (const line of lines) {
    current = applyLine(current, line);
  }
  return current;
}

/**
 * Stable snapshot of everything the page renders, for replay diffing.
 * Deliberately excludes nothing: if the DOM shows it, it is in here.
 */
export function snapshot(state: RenderState): string {
  return JSON.stringify(state);
}
