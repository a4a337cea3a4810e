// Pure view-model for the equirectangular coverage heatmap.  Every value
// here is decoded straight from server messages; the UI never computes
// coverage itself.

import { GuidanceHint } from "./protocol.js";

/** 0 = empty, 1 = covered (raw), 2 = added by display refinement. */
export type CellState = 0 | 1 | 2;

export interface HeatmapModel {
  nPhi: number;
  nTheta: number;
  cells: CellState[]; // row-major, row p=0 first (south pole)
  coveredCount: number;
  refinedAddedCount: number;
}

export function popcount(bits: string): number {
  let n = 0;
  for (let i = 0; i < bits.length; i++) {
    if (bits[i] === "1") n++;
  }
  return n;
}

export function buildHeatmap(
  grid: [number, number],
  raw: string,
  refined: string,
): HeatmapModel {
  const [nPhi, nTheta] = grid;
  const size = nPhi * nTheta;
  if (raw.length !== size || refined.length !== size) {
    throw new Error(
      `matrix length mismatch: grid ${nPhi}x${nTheta} needs ${size} bits, ` +
        `got raw=${raw.length} refined=${refined.length}`,
    );
  }
  const cells: CellState[] = new Array(size);
  let covered = 0;
  let added = 0;
  for (let i = 0; i < size; i++) {
    if (raw[i] === "1") {
      cells[i] = 1;
      covered++;
    } else if (refined[i] === "1") {
      cells[i] = 2;
      added++;
    } else {
      cells[i] = 0;
    }
  }
  return { nPhi, nTheta, cells, coveredCount: covered, refinedAddedCount: added };
}

export const CELL_COLORS: Record<CellState, string> = {
  0: "#1b2430", // empty
  1: "#3b82f6", // captured viewpoints
  2: "#ef4444", // refinement-added cells
};

export function cellColor(state: CellState): string {
  return CELL_COLORS[state];
}

/** Screen-space arrow direction toward the hint target: +x right (yaw),
 *  +y up (pitch). */
export function arrowAngleRad(hint: GuidanceHint): number {
  return Math.atan2(hint.pitch_delta_deg, hint.yaw_delta_deg);
}

/** Canvas rectangle for a cell, with row p=0 drawn at the bottom. */
export function cellRect(
  model: HeatmapModel,
  p: number,
  t: number,
  width: number,
  height: number,
): { x: number; y: number; w: number; h: number } {
  const w = width / model.nTheta;
  const h = height / model.nPhi;
  return { x: t * w, y: (model.nPhi - 1 - p) * h, w, h };
}
