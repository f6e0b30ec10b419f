#!/usr/bin/env python3
"""
APFREE - Files and Reports
Set files, run reports (JSON / CSV / Markdown) and sweep rows.

Set file format: optional '#' comment lines first (a '# N=<int>' comment
fixes the range), then one decimal integer per line, strictly increasing.
"""

import csv
import io
import json
import re
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from jinja2 import Template

from core.config import config, TEMPLATES_DIR
from core.errors import ParameterError, SetFileError
from core.models import BoundReport, CandidateSet, RunReport

logger = logging.getLogger(__name__)

N_HEADER = re.compile(r"^#\s*N\s*=\s*(\d+)\s*$")

INT_FIELDS = {"n_limit", "d", "seed", "trials", "size", "ap_count", "behrend_size"}
STR_FIELDS = {"command"}


# ============== SET FILES ==============

def format_set_file(s: CandidateSet) -> str:
    lines = [
        "# apfree progression-free set",
        f"# N={s.n_limit}",
        f"# size={len(s)}",
        f"# certified={'yes' if s.certified_ap_free else 'no'}",
    ]
    lines.extend(str(x) for x in s.elements)
    return "\n".join(lines) + "\n"


def write_set_file(path: Union[str, Path], s: CandidateSet) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_set_file(s), encoding="utf-8")
    logger.debug(f"💾 {len(s)} elements -> {path}")
    return path


def parse_set_text(text: str, n_limit: Optional[int] = None) -> CandidateSet:
    """Strict parser; SetFileError names the first bad entry"""
    header_n = None
    values: List[int] = []
    seen = set()
    in_header = True
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            if not in_header:
                raise SetFileError("malformed", line_no, raw)
            match = N_HEADER.match(line)
            if match:
                header_n = int(match.group(1))
            continue
        in_header = False
        if not re.fullmatch(r"[0-9]+", line):
            raise SetFileError("malformed", line_no, raw)
        value = int(line)
        if value in seen:
            raise SetFileError("duplicate", line_no, raw)
        if values and value < values[-1]:
            raise SetFileError("unsorted", line_no, raw)
        limit = n_limit if n_limit is not None else header_n
        if value < 1 or (limit is not None and value > limit):
            raise SetFileError("out-of-range", line_no, raw)
        seen.add(value)
        values.append(value)

    limit = n_limit if n_limit is not None else header_n
    if limit is None:
        limit = values[-1] if values else 1
    return CandidateSet(limit, tuple(values))


def read_set_file(path: Union[str, Path], n_limit: Optional[int] = None) -> CandidateSet:
    path = Path(path)
    if not path.exists():
        raise ParameterError(f"set file not found: {path}")
    return parse_set_text(path.read_text(encoding="utf-8"), n_limit)


# ============== RUN REPORTS ==============

def report_to_json(report: RunReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def report_from_json(text: str) -> RunReport:
    return RunReport.from_dict(json.loads(text))


def _cell(value) -> str:
    return "" if value is None else repr(value) if isinstance(value, float) else str(value)


def _parse_cell(name: str, text: str):
    if text == "":
        return None
    if name in STR_FIELDS:
        return text
    if name in INT_FIELDS:
        return int(text)
    return float(text)


def report_to_csv(report: RunReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    names = RunReport.field_names()
    writer.writerow(names)
    data = report.to_dict()
    writer.writerow([_cell(data[name]) for name in names])
    return buffer.getvalue()


def report_from_csv(text: str) -> RunReport:
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) != 2:
        raise ParameterError(f"report CSV needs a header and one row, got {len(rows)} rows")
    header, row = rows
    return RunReport.from_dict({name: _parse_cell(name, cell) for name, cell in zip(header, row)})


def report_to_markdown(report: RunReport, bounds: Optional[BoundReport] = None) -> str:
    template_path = TEMPLATES_DIR / "run_report.md.j2"
    with open(template_path, "r", encoding="utf-8") as f:
        template = Template(f.read())
    rows = [(k, _cell(v)) for k, v in report.to_dict().items() if v is not None and k not in ("command", "n_limit")]
    return template.render(report=report, rows=rows, bounds=bounds)


def render_report(report: RunReport, fmt: str, bounds: Optional[BoundReport] = None) -> str:
    if fmt == "json":
        return report_to_json(report)
    if fmt == "csv":
        return report_to_csv(report)
    if fmt == "md":
        return report_to_markdown(report, bounds)
    raise ParameterError(f"unknown report format: {fmt} (choose from {config.output.report_formats})")


# ============== SWEEP CSV ==============

def _fmt(value: float) -> str:
    return f"{value:.{config.output.float_digits}g}"


def sweep_row(
    N: int,
    d: int,
    delta: float,
    r: float,
    elkin_size: int,
    behrend_size: int,
    bounds: BoundReport,
) -> Dict[str, str]:
    return {
        "N": str(N),
        "d": str(d),
        "delta": _fmt(delta),
        "r": _fmt(r),
        "elkin_size": str(elkin_size),
        "behrend_size": str(behrend_size),
        "behrend_bound": _fmt(bounds.behrend_value),
        "elkin_bound": _fmt(bounds.elkin_value),
        "ratio": _fmt(elkin_size / bounds.elkin_value),
    }


def sweep_csv(rows: Iterable[Dict[str, str]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=config.output.sweep_columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def parse_n_list(text: str) -> List[int]:
    """'1000,10000' -> [1000, 10000]; anything else is a ParameterError"""
    items = [t.strip() for t in text.split(",")]
    if not items or any(not re.fullmatch(r"[0-9]+", t) for t in items):
        raise ParameterError(f"malformed --n-list: {text!r}")
    return [int(t) for t in items]
