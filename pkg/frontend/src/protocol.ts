// Live session protocol v1: JSON text frames, angles in degrees on the
// wire, coverage matrices as row-major 0/1 strings (row p=0 first).

export const PROTOCOL_VERSION = 1;

export interface ConfigOverrides {
  grid_theta?: number;
  grid_phi?: number;
  pole_zone?: number;
  alpha?: number;
  a_th?: number;
  omega_th?: number;
  hold_ms?: number;
  recapture?: "once" | "always";
}

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // [x, y, z, w]

export interface RigSample {
  t_ms: number;
  q: Quat;
  a: Vec3;
  w: Vec3;
}

export interface GuidanceHint {
  target_cell: [number, number];
  target_theta_deg: number;
  target_phi_deg: number;
  yaw_delta_deg: number;
  pitch_delta_deg: number;
  uncovered_area_pct: number;
}

export interface ReadyMessage {
  v: number;
  type: "ready";
  config: Required<ConfigOverrides>;
}

export interface StateMessage {
  v: number;
  type: "state";
  gate_status: "stable" | "unstable" | "warmup";
  coverage_pct: number;
  current_cell: [number, number] | null;
  newly_covered: boolean;
  hint: GuidanceHint | null;
}

export interface SnapshotMessage {
  v: number;
  type: "snapshot";
  grid: [number, number]; // [n_phi, n_theta]
  raw: string;
  refined: string;
  coverage_pct: number;
  captures: unknown[];
}

export interface ReportMessage {
  v: number;
  type: "report";
  report: Record<string, unknown>;
}

export interface ErrorMessage {
  v: number;
  type: "error";
  code: "bad_order" | "bad_sample" | "bad_config";
  message: string;
}

export type ServerMessage =
  | ReadyMessage
  | StateMessage
  | SnapshotMessage
  | ReportMessage
  | ErrorMessage;

const SERVER_TYPES = new Set(["ready", "state", "snapshot", "report", "error"]);

export function helloMessage(config: ConfigOverrides = {}): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "hello", config });
}

export function sampleMessage(s: RigSample): string {
  return JSON.stringify({
    v: PROTOCOL_VERSION,
    type: "sample",
    t_ms: s.t_ms,
    q: s.q,
    a: s.a,
    w: s.w,
  });
}

export function snapshotRequestMessage(): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "snapshot_request" });
}

export function finalizeMessage(): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "finalize" });
}

export function parseServerMessage(text: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new Error("server frame is not valid JSON");
  }
  if (
    typeof obj !== "object" ||
    obj === null ||
    !SERVER_TYPES.has((obj as { type?: string }).type ?? "")
  ) {
    throw new Error("unrecognized server message");
  }
  return obj as ServerMessage;
}
