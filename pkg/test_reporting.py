#!/usr/bin/env python3
"""
APFREE - Files and Reports Tests
"""

import json
import logging
import tempfile
from pathlib import Path

from core.errors import ParameterError, SetFileError
from core.models import CandidateSet, RunReport
from engine.bounds import bound_report
from engine.reporting import (
    parse_n_list,
    parse_set_text,
    read_set_file,
    render_report,
    report_from_csv,
    report_from_json,
    sweep_csv,
    sweep_row,
    write_set_file,
)

logger = logging.getLogger(__name__)


def _sample_report() -> RunReport:
    return RunReport(
        command="construct", n_limit=100, d=4, delta=0.0999, r=0.6, seed=7, trials=64,
        c_delta=1.0, size=9, ap_count=0, elapsed_ms=12.5, volume_mean=0.0187,
        volume_std_error=0.0002, floor=0.31, shape_term=0.75,
        behrend_bound=4.1, elkin_bound=8.6,
    )


def _kind(text: str, n_limit=None) -> str:
    try:
        parse_set_text(text, n_limit)
    except SetFileError as e:
        return e.kind
    raise AssertionError(f"accepted {text!r}")


# ============== SET FILES ==============

def test_parse_set_text():
    """Test: comments first, then strictly increasing integers"""
    s = parse_set_text("# a set\n# N=10\n1\n2\n4\n5\n")
    assert s.n_limit == 10 and s.elements == (1, 2, 4, 5)
    assert parse_set_text("3\n7\n").n_limit == 7
    assert parse_set_text("").elements == ()
    logger.info("✅ set file parsing")


def test_parse_set_text_errors():
    """Test: each malformed input names its kind"""
    assert _kind("2\n1\n") == "unsorted"
    assert _kind("1\n1\n") == "duplicate"
    assert _kind("# N=5\n6\n") == "out-of-range"
    assert _kind("0\n") == "out-of-range"
    assert _kind("4\n", n_limit=3) == "out-of-range"
    assert _kind("1\nabc\n") == "malformed"
    assert _kind("1\n-2\n") == "malformed"
    assert _kind("1\n# late comment\n") == "malformed"
    assert _kind("1\n\n2\n") == "malformed"
    try:
        parse_set_text("2\n1\n")
    except SetFileError as e:
        assert e.line_no == 2
        assert "unsorted" in str(e)
        assert isinstance(e, ParameterError)
    logger.info("✅ set file errors")


def test_set_file_write_read():
    """Test: a written file reads back with the same elements and range"""
    s = CandidateSet(50, (1, 2, 4, 5, 10, 11, 13, 14))
    with tempfile.TemporaryDirectory() as tmp:
        path = write_set_file(Path(tmp) / "out" / "s.txt", s)
        text = path.read_text(encoding="utf-8")
        assert text.startswith("# apfree")
        assert "# N=50" in text
        back = read_set_file(path)
        assert back.elements == s.elements and back.n_limit == 50
        try:
            read_set_file(Path(tmp) / "missing.txt")
            raise AssertionError("missing file accepted")
        except ParameterError:
            pass
    logger.info("✅ set file write/read")


# ============== REPORTS ==============

def test_report_formats():
    """Test: JSON and CSV reports reproduce the record; Markdown renders"""
    report = _sample_report()
    assert report_from_json(render_report(report, "json")) == report
    assert report_from_csv(render_report(report, "csv")) == report

    data = json.loads(render_report(report, "json"))
    assert data["behrend_size"] is None

    bounds = bound_report(100, 9, behrend_size=12)
    md = render_report(report, "md", bounds)
    assert md.startswith("# construct : N = 100")
    assert "| size | 9 |" in md
    assert "size_over_elkin" in md
    assert "behrend_size" not in md.split("## Bounds")[0]
    try:
        render_report(report, "xml")
        raise AssertionError("unknown format accepted")
    except ParameterError:
        pass
    logger.info("✅ report formats")


def test_sweep_csv():
    """Test: fixed header and one row per N"""
    rows = [
        sweep_row(n, 5, 0.05, 0.6, 10 + n // 1000, 12, bound_report(n, 10))
        for n in (1000, 2000)
    ]
    text = sweep_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "N,d,delta,r,elkin_size,behrend_size,behrend_bound,elkin_bound,ratio"
    assert len(lines) == 3
    assert lines[1].startswith("1000,5,0.05,0.6,11,12,")
    assert parse_n_list("1000, 2000,3000") == [1000, 2000, 3000]
    for bad in ("", "10,,20", "1e3", "10;20"):
        try:
            parse_n_list(bad)
            raise AssertionError(f"accepted {bad!r}")
        except ParameterError:
            pass
    logger.info("✅ sweep CSV")
