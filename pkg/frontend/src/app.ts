// Browser app: steer the virtual rig with pointer drags, stream genuine
// protocol samples to the live service, and render what the server says
// (coverage heatmap, gate state, capture flashes, guidance arrow).

import {
  buildHeatmap,
  cellColor,
  cellRect,
  arrowAngleRad,
  HeatmapModel,
} from "./heatmap.js";
import {
  ConfigOverrides,
  finalizeMessage,
  helloMessage,
  parseServerMessage,
  sampleMessage,
  snapshotRequestMessage,
  StateMessage,
} from "./protocol.js";
import { VirtualRig } from "./rig.js";

const params = new URLSearchParams(window.location.search);
const serverUrl = params.get("server") ?? "ws://127.0.0.1:8787";

const overrides: ConfigOverrides = {};
for (const key of ["grid_theta", "grid_phi", "hold_ms"] as const) {
  const v = params.get(key);
  if (v !== null) overrides[key] = parseInt(v, 10);
}
for (const key of ["a_th", "omega_th", "alpha", "pole_zone"] as const) {
  const v = params.get(key);
  if (v !== null) overrides[key] = parseFloat(v);
}

const canvas = document.getElementById("heatmap") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const coverageEl = document.getElementById("coverage")!;
const gateEl = document.getElementById("gate")!;
const staleEl = document.getElementById("stale")!;
const bannerEl = document.getElementById("banner")!;
const arrowEl = document.getElementById("arrow")!;
const connEl = document.getElementById("conn")!;
const accelSlider = document.getElementById("accel") as HTMLInputElement;
const accelValue = document.getElementById("accel-value")!;
const finalizeBtn = document.getElementById("finalize") as HTMLButtonElement;
const reportEl = document.getElementById("report")!;

const rig = new VirtualRig({ sampleRateHz: 30, accelMag: 0.05 });
let ws: WebSocket | null = null;
let ready = false;
let lastMessageAt = 0;
let lastState: StateMessage | null = null;
let heatmap: HeatmapModel | null = null;
let flashUntil = 0;
let finalized = false;

function connect(): void {
  rig.reset();
  ready = false;
  finalized = false;
  reportEl.textContent = "";
  ws = new WebSocket(serverUrl);
  connEl.textContent = `connecting to ${serverUrl}…`;

  ws.onopen = () => ws!.send(helloMessage(overrides));
  ws.onclose = () => {
    connEl.textContent = "disconnected — release the pointer to reconnect";
    ready = false;
    // a fresh session resumes on the next connect()
    setTimeout(connect, 1500);
  };
  ws.onmessage = (ev) => {
    lastMessageAt = performance.now();
    const msg = parseServerMessage(String(ev.data));
    switch (msg.type) {
      case "ready":
        ready = true;
        connEl.textContent =
          `session live (grid ${msg.config.grid_theta}x${msg.config.grid_phi})`;
        break;
      case "state":
        lastState = msg;
        if (msg.newly_covered) flashUntil = performance.now() + 180;
        break;
      case "snapshot":
        heatmap = buildHeatmap(msg.grid, msg.raw, msg.refined);
        break;
      case "report":
        reportEl.textContent = JSON.stringify(msg.report, null, 2);
        finalized = true;
        break;
      case "error":
        connEl.textContent = `server error ${msg.code}: ${msg.message}`;
        break;
    }
  };
}

// --- input wiring -----------------------------------------------------

let dragging = false;
canvas.addEventListener("pointerdown", (ev) => {
  dragging = true;
  canvas.setPointerCapture(ev.pointerId);
});
canvas.addEventListener("pointerup", () => (dragging = false));
canvas.addEventListener("pointermove", (ev) => {
  if (dragging) rig.pointerDrag(ev.movementX, ev.movementY);
});
window.addEventListener("keydown", (ev) => {
  const step = 2.0;
  if (ev.key === "ArrowLeft") rig.setAngles(rig.yawDeg - step, rig.pitchDeg);
  if (ev.key === "ArrowRight") rig.setAngles(rig.yawDeg + step, rig.pitchDeg);
  if (ev.key === "ArrowUp") rig.setAngles(rig.yawDeg, rig.pitchDeg + step);
  if (ev.key === "ArrowDown") rig.setAngles(rig.yawDeg, rig.pitchDeg - step);
});

accelSlider.addEventListener("input", () => {
  rig.setAccelMag(parseFloat(accelSlider.value));
  accelValue.textContent = `${accelSlider.value} m/s²`;
});

finalizeBtn.addEventListener("click", () => {
  if (ws && ready && !finalized) ws.send(finalizeMessage());
});

// --- render loop ------------------------------------------------------

let lastSnapshotReq = 0;

function frame(now: number): void {
  if (ws && ws.readyState === WebSocket.OPEN && ready && !finalized) {
    const sample = rig.tick(now);
    if (sample) ws.send(sampleMessage(sample));
    if (now - lastSnapshotReq > 250) {
      ws.send(snapshotRequestMessage());
      lastSnapshotReq = now;
    }
  }
  draw(now);
  requestAnimationFrame(frame);
}

function draw(now: number): void {
  ctx.fillStyle = "#0c1118";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (heatmap) {
    for (let p = 0; p < heatmap.nPhi; p++) {
      for (let t = 0; t < heatmap.nTheta; t++) {
        const state = heatmap.cells[p * heatmap.nTheta + t];
        const r = cellRect(heatmap, p, t, canvas.width, canvas.height);
        ctx.fillStyle = cellColor(state);
        ctx.fillRect(r.x + 0.5, r.y + 0.5, r.w - 1, r.h - 1);
      }
    }
  }
  // marker for the rig's own view (input echo, not server data)
  const mx = ((rig.yawDeg % 360 + 540) % 360) / 360 * canvas.width;
  const my = (1 - (rig.pitchDeg + 90) / 180) * canvas.height;
  ctx.strokeStyle = "#f8fafc";
  ctx.lineWidth = 2;
  ctx.strokeRect(mx - 5, my - 5, 10, 10);

  if (flashUntil > now) {
    ctx.fillStyle = "rgba(255,255,255,0.25)";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
  }

  if (lastState) {
    coverageEl.textContent = `${lastState.coverage_pct.toFixed(2)}%`;
    gateEl.textContent = lastState.gate_status;
    gateEl.className = `chip ${lastState.gate_status}`;
    const done = lastState.coverage_pct >= 100;
    bannerEl.style.display = done ? "block" : "none";
    if (lastState.hint && !done) {
      const ang = arrowAngleRad(lastState.hint);
      arrowEl.style.display = "inline-block";
      // screen y grows downward, pitch grows upward
      arrowEl.style.transform = `rotate(${-ang}rad)`;
      arrowEl.title =
        `yaw ${lastState.hint.yaw_delta_deg.toFixed(1)}°, ` +
        `pitch ${lastState.hint.pitch_delta_deg.toFixed(1)}°`;
    } else {
      arrowEl.style.display = "none";
    }
  }
  staleEl.style.display =
    ready && performance.now() - lastMessageAt > 1000 ? "inline-block" : "none";
}

connect();
requestAnimationFrame(frame);
