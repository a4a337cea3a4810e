// Protocol encoding/decoding.

import { describe, expect, it } from "vitest";
import {
  finalizeMessage,
  helloMessage,
  parseServerMessage,
  sampleMessage,
  snapshotRequestMessage,
} from "../src/protocol.js";

describe("client message builders", () => {
  it("hello carries version and config", () => {
    const msg = JSON.parse(helloMessage({ grid_theta: 12 }));
    expect(msg).toEqual({ v: 1, type: "hello", config: { grid_theta: 12 } });
  });

  it("sample carries the full reading", () => {
    const msg = JSON.parse(
      sampleMessage({ t_ms: 40, q: [0, 0, 0, 1], a: [0.1, 0, 0], w: [0, 0, 0] }),
    );
    expect(msg.type).toBe("sample");
    expect(msg.v).toBe(1);
    expect(msg.t_ms).toBe(40);
    expect(msg.q).toEqual([0, 0, 0, 1]);
  });

  it("control messages are minimal", () => {
    expect(JSON.parse(snapshotRequestMessage())).toEqual({ v: 1, type: "snapshot_request" });
    expect(JSON.parse(finalizeMessage())).toEqual({ v: 1, type: "finalize" });
  });
});

describe("parseServerMessage", () => {
  it("accepts known server types", () => {
    const state = parseServerMessage(
      JSON.stringify({
        v: 1,
        type: "state",
        gate_status: "stable",
        coverage_pct: 12.5,
        current_cell: [9, 18],
        newly_covered: true,
        hint: null,
      }),
    );
    expect(state.type).toBe("state");
  });

  it("rejects garbage and unknown types", () => {
    expect(() => parseServerMessage("not json")).toThrow();
    expect(() => parseServerMessage('{"type":"mystery"}')).toThrow();
    expect(() => parseServerMessage("42")).toThrow();
  });
});
