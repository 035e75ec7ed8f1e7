"""Text formats: edge lists, JSON lines and CSV tables.

Every artifact carries the run configuration: edge lists as a ``# config``
comment after the header, CSV files as a leading ``# config`` line, JSONL
files as a first ``{"config": ...}`` record.
"""

from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path
from typing import Any, Iterable, Sequence, TextIO

from .errors import ParameterError
from .quotient import LocalGraph

VERSION = "1.0.0"
FORMAT_TAG = "locograph v1"

_HEADER = re.compile(r"^# locograph v1 n=(\d+) d=(\d+)\s*$")


class EdgeListError(ParameterError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def config_line(config: dict[str, Any] | None) -> str:
    payload = {"version": VERSION, **(config or {})}
    return "# config " + json.dumps(payload, sort_keys=True)


def format_edge_list(g: LocalGraph, d: int, config: dict[str, Any] | None = None) -> str:
    lines = [f"# {FORMAT_TAG} n={g.n} d={d}"]
    if config is not None:
        lines.append(config_line(config))
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> tuple[LocalGraph, int]:
    """Parse an edge list; returns (graph, d).

    Edges must be 0-indexed pairs u < v in strictly increasing order."""
    lines = text.splitlines()
    if not lines:
        raise EdgeListError(1, "empty file")
    m = _HEADER.match(lines[0])
    if m is None:
        raise EdgeListError(1, "expected header '# locograph v1 n=<N> d=<d>'")
    n, d = int(m.group(1)), int(m.group(2))
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise EdgeListError(lineno, f"expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise EdgeListError(lineno, f"edge {u} {v} must satisfy u < v")
        if v >= n:
            raise EdgeListError(lineno, f"vertex {v} out of range for n={n}")
        if edges and (u, v) <= edges[-1]:
            what = "duplicate" if (u, v) == edges[-1] else "unsorted"
            raise EdgeListError(lineno, f"{what} edge {u} {v}")
        edges.append((u, v))
    return LocalGraph.from_edges(n, edges), d


def read_edge_list(path: str | Path) -> tuple[LocalGraph, int]:
    return parse_edge_list(Path(path).read_text())


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_jsonl(fh: TextIO, records: Iterable[Any], config: dict[str, Any] | None = None) -> None:
    if config is not None:
        fh.write(dump_json({"config": {"version": VERSION, **config}}) + "\n")
    for rec in records:
        fh.write(dump_json(rec) + "\n")


def read_jsonl(path: str | Path) -> tuple[dict[str, Any] | None, list[Any]]:
    """Returns (config or None, remaining records)."""
    config = None
    records = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            obj = json.loads(line)
            if i == 0 and isinstance(obj, dict) and set(obj) == {"config"}:
                config = obj["config"]
            else:
                records.append(obj)
    return config, records


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], config: dict[str, Any] | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write(config_line(config) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]
