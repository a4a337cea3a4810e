// Virtual capture rig: pointer/key input steers yaw and pitch, and the
// rig emits genuine protocol samples (quaternion + synthetic motion
// magnitudes) at a fixed cadence with monotonic timestamps.  It is a
// plain protocol client - no privileged path into the server.

import { Quat, RigSample } from "./protocol.js";

const DEG = Math.PI / 180;
// open lower bound of the pitch interval (-90, 90]
const PITCH_MIN = -90 + 1e-9;
const PITCH_MAX = 90;

/** Orientation whose view direction comes out at (theta, phi): yaw about
 *  +y composed with pitch about +x (pitch applied first), [x,y,z,w]. */
export function quatFromViewAngles(thetaRad: number, phiRad: number): Quat {
  const cy = Math.cos(thetaRad / 2);
  const sy = Math.sin(thetaRad / 2);
  const cx = Math.cos(phiRad / 2);
  const sx = -Math.sin(phiRad / 2);
  return [cy * sx, cx * sy, -sy * sx, cy * cx];
}

export interface RigOptions {
  sampleRateHz?: number;
  accelMag?: number;
  degPerPixel?: number;
}

export class VirtualRig {
  yawDeg = 0;
  pitchDeg = 0;
  accelMag: number;
  readonly sampleRateHz: number;
  readonly degPerPixel: number;

  private startMs: number | null = null;
  private lastEmitMs: number | null = null;
  private lastT = -1;
  private lastYaw = 0;
  private lastPitch = 0;

  constructor(opts: RigOptions = {}) {
    this.sampleRateHz = opts.sampleRateHz ?? 30;
    this.accelMag = opts.accelMag ?? 0.05;
    this.degPerPixel = opts.degPerPixel ?? 0.4;
  }

  pointerDrag(dxPx: number, dyPx: number): void {
    this.setAngles(
      this.yawDeg + dxPx * this.degPerPixel,
      this.pitchDeg - dyPx * this.degPerPixel,
    );
  }

  setAngles(yawDeg: number, pitchDeg: number): void {
    this.yawDeg = yawDeg;
    this.pitchDeg = Math.min(PITCH_MAX, Math.max(PITCH_MIN, pitchDeg));
  }

  setAccelMag(mag: number): void {
    this.accelMag = Math.max(0, mag);
  }

  /** Restart emission (new session): timestamps begin again at 0. */
  reset(): void {
    this.startMs = null;
    this.lastEmitMs = null;
    this.lastT = -1;
  }

  /** Emit a sample when the cadence has elapsed; nowMs is any monotonic
   *  millisecond clock. */
  tick(nowMs: number): RigSample | null {
    const period = 1000 / this.sampleRateHz;
    if (this.startMs === null) {
      this.startMs = nowMs;
    } else if (this.lastEmitMs !== null && nowMs - this.lastEmitMs < period) {
      return null;
    }

    let t = Math.round(nowMs - this.startMs);
    if (t <= this.lastT) {
      t = this.lastT + 1;
    }

    // angular velocity from the input dynamics since the last emission
    const dt = this.lastEmitMs === null ? period : nowMs - this.lastEmitMs;
    const yawRate = ((this.yawDeg - this.lastYaw) * DEG) / (dt / 1000);
    const pitchRate = ((this.pitchDeg - this.lastPitch) * DEG) / (dt / 1000);

    this.lastEmitMs = nowMs;
    this.lastT = t;
    this.lastYaw = this.yawDeg;
    this.lastPitch = this.pitchDeg;

    return {
      t_ms: t,
      q: quatFromViewAngles(this.yawDeg * DEG, this.pitchDeg * DEG),
      a: [this.accelMag, 0, 0],
      w: [yawRate, pitchRate, 0],
    };
  }
}
