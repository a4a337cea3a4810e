"""Outputs conform to the published schema files."""

import json
from pathlib import Path

import jsonschema
import pytest

from sphericap import synth
from sphericap.logio import serialize_log
from sphericap.session import CaptureSession, SessionConfig, report_to_dict

DOCS = Path(__file__).resolve().parent.parent / "docs"


@pytest.fixture(scope="module")
def orbit_session():
    s = CaptureSession(SessionConfig())
    for smp in synth.orbit_samples(duration_s=6.0):
        s.ingest(smp)
    return s


def test_log_lines_match_schema():
    schema = json.loads((DOCS / "log_record.schema.json").read_text())
    samples = synth.orbit_samples(duration_s=2.0)
    for line in serialize_log(samples).splitlines():
        jsonschema.validate(json.loads(line), schema)


def test_report_matches_schema(orbit_session):
    schema = json.loads((DOCS / "report.schema.json").read_text())
    jsonschema.validate(report_to_dict(orbit_session.finalize()), schema)


def test_empty_report_matches_schema():
    schema = json.loads((DOCS / "report.schema.json").read_text())
    jsonschema.validate(report_to_dict(CaptureSession(SessionConfig()).finalize()), schema)
