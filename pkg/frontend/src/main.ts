// Browser wiring: session picker, mouse-as-gaze streaming, canvas loop,
// and trace-upload replay.

import { beep } from "./audio.js";
import { SessionClient } from "./client.js";
import { GazeStreamer, parseTrace, TraceReplayer } from "./gazeInput.js";
import { Renderer } from "./renderer.js";
import { ViewState } from "./viewState.js";

const canvas = document.getElementById("board") as HTMLCanvasElement;
const variantSel = document.getElementById("variant") as HTMLSelectElement;
const revisionSel = document.getElementById("revision") as HTMLSelectElement;
const speedSel = document.getElementById("speed") as HTMLSelectElement;
const serverInput = document.getElementById("server") as HTMLInputElement;
const connectBtn = document.getElementById("connect") as HTMLButtonElement;
const calibrateBtn = document.getElementById("calibrate") as HTMLButtonElement;
const phraseInput = document.getElementById("phrase") as HTMLInputElement;
const phraseBtn = document.getElementById("start-phrase") as HTMLButtonElement;
const traceInput = document.getElementById("trace") as HTMLInputElement;

const view = new ViewState();
const renderer = new Renderer(canvas);

let client: SessionClient | null = null;
let replayer: TraceReplayer | null = null;
const clock = () => performance.now();

const streamer = new GazeStreamer((msg) => client?.send(msg), clock);

canvas.addEventListener("mousemove", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const cx = ((ev.clientX - rect.left) * canvas.width) / rect.width;
  const cy = ((ev.clientY - rect.top) * canvas.height) / rect.height;
  const [sx, sy] = renderer.toScreen(view, [cx, cy]);
  streamer.setPointer(sx, sy);
});
canvas.addEventListener("mouseleave", () => streamer.clearPointer());

connectBtn.addEventListener("click", () => {
  client?.close();
  client = new SessionClient(serverInput.value, {
    variant: variantSel.value,
    revision: revisionSel.value,
    speed: Number(speedSel.value),
  });
  client.onMessage = (msg) => view.apply(msg);
  client.onStatus = (status) => {
    view.status = status;
  };
  client.connect();
});

calibrateBtn.addEventListener("click", () => {
  client?.send({ type: "calibrate_start", samples: 60 });
});

phraseBtn.addEventListener("click", () => {
  const text = phraseInput.value.trim();
  if (text) client?.send({ type: "start_phrase", text });
});

traceInput.addEventListener("change", async () => {
  const file = traceInput.files?.[0];
  if (!file || client === null) return;
  const samples = parseTrace(await file.text());
  replayer = new TraceReplayer(samples, (msg) => client?.send(msg), clock);
  replayer.start();
});

// 60 Hz sampling, independent of the render loop.
setInterval(() => {
  if (replayer !== null && !replayer.done) {
    replayer.tick();
  } else {
    streamer.tick();
  }
}, 1000 / 60);

function frame(): void {
  if (view.beepPending) {
    view.beepPending = false;
    beep();
  }
  const cursor = replayer !== null && !replayer.done ? replayer.cursor : streamer.position;
  renderer.render(view, clock(), cursor);
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
