"""Live session endpoint: one WebSocket connection = one capture session.

Wire protocol (text frames, one JSON message each, version field "v": 1;
all angles cross this boundary in degrees):

  client -> server
    {"v": 1, "type": "hello", "config": {...}}    config keys optional,
                                                  same names as the CLI
    {"v": 1, "type": "sample", "t_ms": int, "q": [x,y,z,w],
     "a": [x,y,z], "w": [x,y,z]}
    {"v": 1, "type": "snapshot_request"}
    {"v": 1, "type": "finalize"}

  server -> client
    {"v": 1, "type": "ready", "config": {...effective...}}
    {"v": 1, "type": "state", "gate_status": "...", "coverage_pct": f,
     "current_cell": [p, t] | null, "newly_covered": bool,
     "hint": {...} | null}                        one per sample, in order
    {"v": 1, "type": "snapshot", "grid": [n_phi, n_theta], "raw": "01...",
     "refined": "01...", "coverage_pct": f, "captures": [...]}
    {"v": 1, "type": "report", "report": {...}}   then the server closes
    {"v": 1, "type": "error", "code": "bad_order|bad_sample|bad_config",
     "message": "..."}                            then the server closes

A session whose connection ends without finalize still gets its report
persisted server-side.  Handlers never share session state; the report
store serializes its writes.
"""

from __future__ import annotations

import asyncio
import json
import math
import uuid
from pathlib import Path

from websockets.asyncio.server import serve
from websockets.exceptions import ConnectionClosed

from .errors import ConfigError, SphericapError
from .gate import GateConfig, ImuSample
from .grid import GridSpec, coverage_rate
from .rotation import Quaternion
from .session import CaptureSession, GuidanceHint, SessionConfig, report_to_dict, report_to_json

PROTOCOL_VERSION = 1


class ReportStore:
    """Append-only store of finished session reports, one JSON file each."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self._lock = asyncio.Lock()

    async def persist(self, session: CaptureSession) -> Path:
        text = report_to_json(session.finalize())
        path = self.directory / f"session_{uuid.uuid4().hex}.json"
        async with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        return path


def _effective_config_dict(cfg: SessionConfig) -> dict:
    return {
        "grid_theta": cfg.grid.n_theta,
        "grid_phi": cfg.grid.n_phi,
        "pole_zone": cfg.grid.pole_zone_deg,
        "alpha": cfg.gate.alpha,
        "a_th": cfg.gate.a_th,
        "omega_th": cfg.gate.omega_th,
        "hold_ms": cfg.gate.hold_ms,
        "recapture": cfg.recapture_policy,
    }


def _apply_overrides(base: SessionConfig, overrides: dict) -> SessionConfig:
    merged = _effective_config_dict(base)
    unknown = set(overrides) - set(merged)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged.update(overrides)
    try:
        return SessionConfig(
            grid=GridSpec(
                n_theta=int(merged["grid_theta"]),
                n_phi=int(merged["grid_phi"]),
                pole_zone_deg=float(merged["pole_zone"]),
            ),
            gate=GateConfig(
                alpha=float(merged["alpha"]),
                a_th=float(merged["a_th"]),
                omega_th=float(merged["omega_th"]),
                hold_ms=int(merged["hold_ms"]),
            ),
            recapture_policy=merged["recapture"],
        )
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e))


def _hint_dict(hint: GuidanceHint | None) -> dict | None:
    if hint is None:
        return None
    return {
        "target_cell": [hint.target_cell.p, hint.target_cell.t],
        "target_theta_deg": math.degrees(hint.target_angles.theta),
        "target_phi_deg": math.degrees(hint.target_angles.phi),
        "yaw_delta_deg": math.degrees(hint.yaw_delta),
        "pitch_delta_deg": math.degrees(hint.pitch_delta),
        "uncovered_area_pct": hint.uncovered_area_pct,
    }


def _parse_sample(msg: dict) -> ImuSample:
    try:
        t_ms = msg["t_ms"]
        q = msg["q"]
        a = msg["a"]
        w = msg["w"]
    except KeyError as e:
        raise SphericapError(f"sample missing field {e}")
    if isinstance(t_ms, bool) or not isinstance(t_ms, int):
        raise SphericapError("t_ms must be an integer")
    for name, vec, arity in (("q", q, 4), ("a", a, 3), ("w", w, 3)):
        if not isinstance(vec, list) or len(vec) != arity:
            raise SphericapError(f"field {name!r} must be a {arity}-element array")
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in vec):
            raise SphericapError(f"field {name!r} has a non-numeric entry")
    return ImuSample(
        t_ms=t_ms,
        q=Quaternion(*(float(x) for x in q)),
        a=tuple(float(x) for x in a),
        omega=tuple(float(x) for x in w),
    )


async def handle_connection(conn, base_cfg: SessionConfig, store: ReportStore) -> None:
    session: CaptureSession | None = None
    persisted = False

    async def send(payload: dict) -> None:
        await conn.send(json.dumps({"v": PROTOCOL_VERSION, **payload}))

    async def fail(code: str, message: str) -> None:
        await send({"type": "error", "code": code, "message": message})
        await conn.close()

    try:
        async for raw in conn:
            try:
                msg = json.loads(raw)
            except ValueError:
                await fail("bad_order", "frame is not valid JSON")
                return
            if not isinstance(msg, dict) or "type" not in msg:
                await fail("bad_order", "message must be an object with a 'type'")
                return
            mtype = msg["type"]

            if mtype == "hello":
                if session is not None:
                    await fail("bad_order", "duplicate hello")
                    return
                if msg.get("v") != PROTOCOL_VERSION:
                    await fail("bad_order", f"unsupported protocol version {msg.get('v')!r}")
                    return
                overrides = msg.get("config") or {}
                if not isinstance(overrides, dict):
                    await fail("bad_config", "config must be an object")
                    return
                try:
                    cfg = _apply_overrides(base_cfg, overrides)
                except ConfigError as e:
                    await fail("bad_config", str(e))
                    return
                session = CaptureSession(cfg)
                await send({"type": "ready", "config": _effective_config_dict(cfg)})

            elif mtype == "sample":
                if session is None:
                    await fail("bad_order", "sample before hello")
                    return
                try:
                    sample = _parse_sample(msg)
                    session.ingest(sample)
                except SphericapError as e:
                    await fail("bad_sample", str(e))
                    return
                await send(
                    {
                        "type": "state",
                        "gate_status": session.last_status.value,
                        "coverage_pct": coverage_rate(session.coverage),
                        "current_cell": (
                            [session.last_cell.p, session.last_cell.t]
                            if session.last_cell
                            else None
                        ),
                        "newly_covered": session.last_newly,
                        "hint": _hint_dict(session.guidance()),
                    }
                )

            elif mtype == "snapshot_request":
                if session is None:
                    await fail("bad_order", "snapshot_request before hello")
                    return
                snap = session.snapshot()
                await send(
                    {
                        "type": "snapshot",
                        "grid": [session.cfg.grid.n_phi, session.cfg.grid.n_theta],
                        "raw": snap.raw.as_bitstring(),
                        "refined": snap.refined.as_bitstring(),
                        "coverage_pct": snap.coverage_pct,
                        "captures": report_to_dict(session.finalize())["captures"],
                    }
                )

            elif mtype == "finalize":
                if session is None:
                    await fail("bad_order", "finalize before hello")
                    return
                await send({"type": "report", "report": report_to_dict(session.finalize())})
                await store.persist(session)
                persisted = True
                await conn.close()
                return

            else:
                await fail("bad_order", f"unknown message type {mtype!r}")
                return
    except ConnectionClosed:
        pass
    finally:
        if session is not None and not persisted:
            await store.persist(session)


async def serve_async(
    host: str, port: int, base_cfg: SessionConfig, reports_dir: Path
) -> None:
    """Run the endpoint until cancelled; prints the bound address."""
    store = ReportStore(Path(reports_dir))

    async def handler(conn):
        await handle_connection(conn, base_cfg, store)

    async with serve(handler, host, port) as server:
        bound_port = server.sockets[0].getsockname()[1] if server.sockets else port
        print(f"listening on ws://{host}:{bound_port}", flush=True)
        await server.serve_forever()


def run_server(host: str, port: int, base_cfg: SessionConfig, reports_dir: Path) -> None:
    asyncio.run(serve_async(host, port, base_cfg, reports_dir))
