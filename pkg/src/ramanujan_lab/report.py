"""Report records and their two renderings.

A report is a list of :class:`Record` objects, one per check.  Every record
has a status: ``held``, ``failed`` or ``excluded`` (not checked, with a
reason).  The structured rendering is JSON lines:

    {"schema": "ramanujan-lab-report", "version": 1, "command": ..., "config": {...}}
    {"command": "congruence", "status": "held", "series_id": "T1.3", ...}
    ...
    {"summary": {"checked": 7, "held": 7, "failed": 0, "excluded": 0}}

An interrupted run ends with ``{"truncated": true}`` after the summary.  The
text rendering is a table followed by the line
``N checked, N held, N failed, N excluded``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_NAME = "ramanujan-lab-report"
SCHEMA_VERSION = 1
STATUSES = ("held", "failed", "excluded")


@dataclass(frozen=True)
class Record:
    command: str
    status: str
    fields: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}, got {self.status!r}")

    def to_json(self) -> dict:
        return {"command": self.command, "status": self.status, **self.fields}

    @classmethod
    def from_json(cls, d: dict) -> "Record":
        d = dict(d)
        return cls(d.pop("command"), d.pop("status"), d)


@dataclass(frozen=True)
class Summary:
    held: int = 0
    failed: int = 0
    excluded: int = 0

    @property
    def checked(self) -> int:
        return self.held + self.failed

    def line(self) -> str:
        return f"{self.checked} checked, {self.held} held, {self.failed} failed, {self.excluded} excluded"

    def to_json(self) -> dict:
        return {"checked": self.checked, "held": self.held, "failed": self.failed, "excluded": self.excluded}


def summarize(records) -> Summary:
    counts = {s: 0 for s in STATUSES}
    for r in records:
        counts[r.status] += 1
    return Summary(counts["held"], counts["failed"], counts["excluded"])


class EmptyReport(ValueError):
    pass


def _header(command, config):
    return {"schema": SCHEMA_NAME, "version": SCHEMA_VERSION, "command": command, "config": config or {}}


def render_json_lines(records, command="", config=None, truncated=False) -> str:
    out = io.StringIO()
    dump = lambda obj: out.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")  # noqa: E731
    dump(_header(command, config))
    for r in records:
        dump(r.to_json())
    dump({"summary": summarize(records).to_json()})
    if truncated:
        dump({"truncated": True})
    return out.getvalue()


def _cell(v):
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render_text(records, command="", config=None, truncated=False) -> str:
    """Aligned table per command, then the summary line."""
    lines = []
    by_cmd: dict[str, list[Record]] = {}
    for r in records:
        by_cmd.setdefault(r.command, []).append(r)
    for cmd, recs in by_cmd.items():
        keys = []
        for r in recs:
            for k in r.fields:
                if k not in keys:
                    keys.append(k)
        cols = ["status"] + keys
        rows = [[r.status] + [_cell(r.fields.get(k)) for k in keys] for r in recs]
        widths = [max(len(c), *(len(row[i]) for row in rows)) for i, c in enumerate(cols)]
        lines.append(f"== {cmd}")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        lines.append("")
    lines.append(summarize(records).line())
    if truncated:
        lines.append("# TRUNCATED")
    return "\n".join(lines) + "\n"


def emit_report(records, fmt: str = "text", path=None, *, command: str = "", config=None,
                allow_empty: bool = False, truncated: bool = False, stream=None) -> str:
    """Render ``records`` and write them to ``path`` (or ``stream``).

    Records are written in the order given; callers hand them over already
    in deterministic order.  Returns the rendered text.
    """
    records = list(records)
    if not records and not allow_empty and not truncated:
        raise EmptyReport("no results to report (pass --allow-empty to accept an empty report)")
    if fmt == "text":
        text = render_text(records, command, config, truncated)
    elif fmt in ("json-lines", "structured"):
        text = render_json_lines(records, command, config, truncated)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        p = Path(path)
        try:
            p.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {p}: {exc.strerror or exc}") from exc
    elif stream is not None:
        stream.write(text)
    return text


@dataclass
class ParsedReport:
    header: dict
    records: list
    summary: dict
    truncated: bool = False


def parse_json_lines(text: str) -> ParsedReport:
    """Inverse of :func:`render_json_lines`; validates the layout."""
    rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty report")
    header = rows[0]
    if header.get("schema") != SCHEMA_NAME:
        raise ValueError("missing report header")
    if header.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report version {header.get('version')}")
    truncated = False
    if rows[-1] == {"truncated": True}:
        truncated = True
        rows = rows[:-1]
    if len(rows) < 2 or "summary" not in rows[-1]:
        raise ValueError("missing summary line")
    records = [Record.from_json(r) for r in rows[1:-1]]
    summary = rows[-1]["summary"]
    if summary != summarize(records).to_json():
        raise ValueError("summary does not match the records")
    return ParsedReport(header, records, summary, truncated)
