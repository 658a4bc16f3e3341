/**
 * Page wiring. Everything stateful lives in small testable modules; this
 * file only moves data between them and the DOM. Directives are folded into
 * the render state the moment they arrive and the DOM is refreshed on the
 * next animation frame, never later.
 */
import { GatewayClient, webSocketTransport } from "./client.js";
import { DEFAULT_CALIBRATION, HoldAndDragCapture, type Calibration } from "./capture.js";
import type { ParsedLine, WireSample } from "./protocol.js";
import {
  applyLine,
  initialRenderState,
  type RenderState,
} from "./renderState.js";
import { drawSparkline, SparklineModel } from "./sparkline.js";
import {
  advanceTutorial,
  currentStage,
  startTutorial,
  tutorialDone,
  TUTORIAL_STAGES,
  type TutorialProgress,
} from "./tutorial.js";

const SETTINGS_KEY = "onepress-demo-settings";

interface Settings {
  wsUrl: string;
  triggerKey: string;
  dragRangePx: number;
}

function loadSettings(): Settings {
  const fallback: Settings = {
    wsUrl: "ws://127.0.0.1:8787",
    triggerKey: " ",
    dragRangePx: DEFAULT_CALIBRATION.dragRangePx,
  };
  try {
    const raw = localStorage.getItem(SETTINGS_KEY);
    if (raw === null) {
      return fallback;
    }
    return { ...fallback, ...(JSON.parse(raw) as Partial<Settings>) };
  } catch {
    return fallback;
  }
}

function saveSettings(s: Settings): void {
  try {
    localStorage.setItem(SETTINGS_KEY, JSON.stringify(s));
  } catch {
    // storage may be unavailable; settings just will not stick
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const settings = loadSettings();

const banner = el<HTMLDivElement>("banner");
const badge = el<HTMLSpanElement>("one-press-badge");
const menuList = el<HTMLUListElement>("menu");
const previewPane = el<HTMLDivElement>("preview-pane");
const previewOverlay = el<HTMLDivElement>("preview-overlay");
const commitPane = el<HTMLDivElement>("commit-pane");
const hintBox = el<HTMLDivElement>("hint");
const tickerList = el<HTMLUListElement>("ticker");
const droppedCounter = el<HTMLSpanElement>("dropped");
const forceKey = el<HTMLDivElement>("force-key");
const forceReadout = el<HTMLSpanElement>("force-readout");
const calibrationFill = el<HTMLDivElement>("calibration-fill");
const tutorialPanel = el<HTMLDivElement>("tutorial");
const connectForm = el<HTMLFormElement>("connect-form");
const urlInput = el<HTMLInputElement>("ws-url");
const dragRangeInput = el<HTMLInputElement>("drag-range");
const triggerKeyInput = el<HTMLInputElement>("trigger-key");
const canvas = el<HTMLCanvasElement>("sparkline");

urlInput.value = settings.wsUrl;
dragRangeInput.value = String(settings.dragRangePx);
triggerKeyInput.value = settings.triggerKey === " " ? "Space" : settings.triggerKey;

let client: GatewayClient | null = null;
let state: RenderState = initialRenderState();
let tutorial: TutorialProgress = startTutorial("canal-winter");
let capture: HoldAndDragCapture | null = null;
let connectionUp = false;
let renderQueued = false;
let dragStartY = 0;
let keyboardForce = 0;

const sparkline = new SparklineModel();
const clockOrigin = performance.now();

function nowMs(): number {
  return Math.round(performance.now() - clockOrigin);
}

function calibration(): Calibration {
  return { ...DEFAULT_CALIBRATION, dragRangePx: settings.dragRangePx };
}

function queueRender(): void {
  if (!renderQueued) {
    renderQueued = true;
    requestAnimationFrame(() => {
      renderQueued = false;
      render();
    });
  }
}

function render(): void {
  banner.textContent = state.banner ?? (connectionUp ? "" : "disconnected: connect to a bridge to start");
  banner.classList.toggle("hidden", state.banner === null && connectionUp);

  badge.classList.toggle("hidden", state.onePressKey === null);
  badge.textContent = state.onePressKey === null ? "" : `one-press: ${state.onePressKey}`;

  menuList.replaceChildren();
  if (state.menu !== null) {
    state.menu.options.forEach((opt, i) => {
      const li = document.createElement("li");
      li.textContent = opt.label;
      if (state.menu!.cursor === i + 1) {
        li.classList.add("highlighted");
      }
      menuList.appendChild(li);
    });
  }
  menuList.classList.toggle("hidden", state.menu === null);

  if (state.preview !== null) {
    previewPane.style.opacity = String(state.preview.contrast);
    previewPane.innerHTML = state.preview.html;
    previewOverlay.textContent = state.preview.overlay;
  } else {
    previewPane.innerHTML = "";
    previewOverlay.textContent = "";
  }
  previewPane.parentElement?.classList.toggle("hidden", state.preview === null);

  if (state.committed !== null) {
    commitPane.style.opacity = "1";
    commitPane.innerHTML = state.committed.html;
  } else {
    commitPane.innerHTML = "";
  }
  commitPane.classList.toggle("hidden", state.committed === null);

  hintBox.textContent = state.hint ?? "";
  hintBox.classList.toggle("hidden", state.hint === null);

  tickerList.replaceChildren();
  for (const entry of state.ticker.slice(-12).reverse()) {
    const li = document.createElement("li");
    li.textContent = entry.text;
    tickerList.appendChild(li);
  }
  droppedCounter.textContent = String(state.dropped);

  const stage = currentStage(tutorial);
  if (tutorialDone(tutorial)) {
    tutorialPanel.innerHTML = "<strong>Tutorial complete.</strong> All four stages done.";
  } else if (stage !== null) {
    const done = TUTORIAL_STAGES.slice(0, tutorial.stage)
      .map((s) => `<li class="done">${s.title}</li>`)
      .join("");
    tutorialPanel.innerHTML = `<ul>${done}<li class="current">${stage.title}</li></ul><p>${stage.goal}</p>`;
  }
}

function handleLine(line: ParsedLine): void {
  if (line.type === "unknown") {
    console.warn("ignoring unknown gateway line:", line.raw);
  }
  state = applyLine(state, line);
  tutorial = advanceTutorial(tutorial, line);
  if (line.type === "event") {
    sparkline.mark(line.t_ms, line.kind);
  }
  queueRender();
}

function connect(url: string): void {
  webSocketTransport(url)
    .then((transport) => {
      client = new GatewayClient(transport);
      connectionUp = true;
      state = initialRenderState();
      tutorial = startTutorial("canal-winter");
      client.onLine(handleLine);
      client.onClose(() => {
        connectionUp = false;
        client = null;
        if (capture !== null && capture.active) {
          capture.release(nowMs());
          capture = null;
        }
        state = { ...state, banner: "connection dropped: capture paused" };
        queueRender();
      });
      client.configure();
      queueRender();
    })
    .catch((err: Error) => {
      state = { ...state, banner: err.message };
      queueRender();
    });
}

function sendSamples(samples: WireSample[]): void {
  if (client === null) {
    return;
  }
  for (const s of samples) {
    sparkline.push(s.t_ms, s.force_n);
    client.sendSample(s);
  }
}

function beginCapture(): void {
  if (!connectionUp || client === null || capture !== null) {
    return;
  }
  capture = new HoldAndDragCapture("space", 100, calibration());
  sendSamples(capture.begin(nowMs()));
  forceKey.classList.add("held");
}

function endCapture(): void {
  if (capture === null) {
    return;
  }
  sendSamples(capture.release(nowMs()));
  capture = null;
  keyboardForce = 0;
  forceKey.classList.remove("held");
}

forceKey.addEventListener("pointerdown", (evt) => {
  evt.preventDefault();
  forceKey.setPointerCapture(evt.pointerId);
  dragStartY = evt.clientY;
  beginCapture();
});

forceKey.addEventListener("pointermove", (evt) => {
  if (capture !== null) {
    capture.setDrag(evt.clientY - dragStartY);
  }
});

forceKey.addEventListener("pointerup", () => endCapture());
forceKey.addEventListener("pointercancel", () => endCapture());

document.addEventListener("keydown", (evt) => {
  if (evt.key === settings.triggerKey && !evt.repeat) {
    evt.preventDefault();
    keyboardForce = 0.8;
    beginCapture();
    capture?.setForce(keyboardForce);
  } else if (capture !== null && evt.key === "ArrowUp") {
    evt.preventDefault();
    keyboardForce = Math.min(keyboardForce + 0.35, DEFAULT_CALIBRATION.fullScaleN);
    capture.setForce(keyboardForce);
  } else if (capture !== null && evt.key === "ArrowDown") {
    evt.preventDefault();
    keyboardForce = Math.max(keyboardForce - 0.35, 0);
    capture.setForce(keyboardForce);
  }
});

document.addEventListener("keyup", (evt) => {
  if (evt.key === settings.triggerKey) {
    endCapture();
  }
});

connectForm.addEventListener("submit", (evt) => {
  evt.preventDefault();
  settings.wsUrl = urlInput.value;
  settings.dragRangePx = Math.max(40, Number(dragRangeInput.value) || DEFAULT_CALIBRATION.dragRangePx);
  const typed = triggerKeyInput.value.trim();
  settings.triggerKey = typed === "" || typed.toLowerCase() === "space" ? " " : typed;
  saveSettings(settings);
  connect(settings.wsUrl);
});

function frame(): void {
  if (capture !== null && connectionUp) {
    sendSamples(capture.collect(nowMs()));
  }
  const force = capture?.currentForce ?? 0;
  forceReadout.textContent = `${force.toFixed(2)} N`;
  calibrationFill.style.height = `${(force / DEFAULT_CALIBRATION.fullScaleN) * 100}%`;
  const ctx = canvas.getContext("2d");
  if (ctx !== null) {
    drawSparkline(ctx, sparkline, canvas.width, canvas.height);
  }
  requestAnimationFrame(frame);
}

render();
requestAnimationFrame(frame);
