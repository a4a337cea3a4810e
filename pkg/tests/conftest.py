"""Shared fixtures: a live service subprocess with an ephemeral port."""

import subprocess
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import pytest


@dataclass
class LiveServer:
    url: str
    reports_dir: Path
    proc: subprocess.Popen


def start_server(reports_dir: Path, extra_args: list[str] | None = None) -> LiveServer:
    cmd = [
        sys.executable,
        "-m",
        "sphericap.cli",
        "serve",
        "--bind",
        "127.0.0.1:0",
        "--out",
        str(reports_dir),
    ] + (extra_args or [])
    proc = subprocess.Popen(
        cmd, stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True, bufsize=1
    )
    deadline = time.monotonic() + 15.0
    line = ""
    while time.monotonic() < deadline:
        line = proc.stdout.readline()
        if "listening on" in line:
            break
        if proc.poll() is not None:
            raise RuntimeError(f"server exited early: {line}")
    else:
        proc.kill()
        raise RuntimeError("server did not report its address in time")
    url = line.strip().split("listening on ", 1)[1]
    return LiveServer(url=url, reports_dir=reports_dir, proc=proc)


@pytest.fixture
def live_server(tmp_path):
    server = start_server(tmp_path / "reports")
    yield server
    server.proc.terminate()
    try:
        server.proc.wait(timeout=10)
    except subprocess.TimeoutExpired:
        server.proc.kill()
