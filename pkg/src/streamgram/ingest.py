"""Event-log file I/O (CSV, JSONL, minimal XES) and dataset statistics."""

from __future__ import annotations

import csv
import gzip
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

from .core import STOP, CaseTrace

PathLike = Union[str, Path]


class LogFormatError(ValueError):
    """A log file violates the expected format."""


def _assemble(rows: Iterable[tuple[str, str]], source: str) -> list[CaseTrace]:
    """Group (case_id, activity) rows into traces, preserving the order of
    first appearance. A row whose activity is the stop symbol closes its
    case explicitly; unclosed cases are closed at end of file. Rows for an
    already closed case are an error."""
    order: list[str] = []
    events: dict[str, list[str]] = {}
    closed: set[str] = set()
    for case_id, activity in rows:
        if case_id in closed:
            raise LogFormatError(
                f"{source}: case {case_id!r} has events after its stop marker "
                "(stop symbol mid-case)")
        if case_id not in events:
            events[case_id] = []
            order.append(case_id)
        if activity == STOP:
            closed.add(case_id)
        else:
            events[case_id].append(activity)
    out = []
    for case_id in order:
        if not events[case_id]:
            raise LogFormatError(f"{source}: case {case_id!r} has no activities")
        out.append(CaseTrace(case_id, tuple(events[case_id]) + (STOP,)))
    return out


# -- CSV ----------------------------------------------------------------

def read_csv(path: PathLike) -> list[CaseTrace]:
    """CSV with header ``case_id,activity[,timestamp]``; extra columns are
    ignored. Rows of one case need not be contiguous."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise LogFormatError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].strip() != "case_id" or header[1].strip() != "activity":
            raise LogFormatError(
                f"{path}: missing 'case_id,activity' header, got {header!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise LogFormatError(f"{path}:{lineno}: expected 2+ columns, got {row!r}")
            rows.append((row[0], row[1]))
    return _assemble(rows, str(path))


def write_csv(log: Sequence[CaseTrace], path: PathLike) -> None:
    """Inverse of :func:`read_csv`: one row per activity, cases contiguous,
    no explicit stop rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "activity"])
        for trace in log:
            for a in trace.body:
                writer.writerow([trace.case_id, a])


# -- JSONL ---------------------------------------------------------------

def read_jsonl(path: PathLike) -> list[CaseTrace]:
    """One JSON object per line with keys ``case_id`` and ``activity``."""
    path = Path(path)
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise LogFormatError(f"{path}:{lineno}: bad JSON: {e}") from None
            if not isinstance(obj, dict) or "case_id" not in obj or "activity" not in obj:
                raise LogFormatError(
                    f"{path}:{lineno}: object must have case_id and activity keys")
            rows.append((str(obj["case_id"]), str(obj["activity"])))
    if not rows:
        raise LogFormatError(f"{path}: empty file")
    return _assemble(rows, str(path))


def write_jsonl(log: Sequence[CaseTrace], path: PathLike) -> None:
    """Inverse of :func:`read_jsonl`: UTF-8, one compact object per line,
    keys written in the order case_id, activity, no stop rows."""
    with open(path, "w", encoding="utf-8") as fh:
        for trace in log:
            for a in trace.body:
                fh.write(json.dumps({"case_id": trace.case_id, "activity": a},
                                    ensure_ascii=False, separators=(",", ":")))
                fh.write("\n")


# -- XES ------------------------------------------------------------------

def _local(tag: str) -> str:
    return tag.rpartition("}")[2]


def _concept_name(element: ET.Element) -> Union[str, None]:
    for child in element:
        if _local(child.tag) == "string" and child.get("key") == "concept:name":
            return child.get("value")
    return None


def read_xes(path: PathLike) -> list[CaseTrace]:
    """Minimal XES reader: per trace, the case id is the trace-level
    concept:name and each event contributes its concept:name as the
    activity. Traces are closed with the stop symbol on load.
    Reads .xes and .xes.gz."""
    path = Path(path)
    opener: IO
    if path.suffix == ".gz":
        opener = gzip.open(path, "rb")
    else:
        opener = open(path, "rb")
    out: list[CaseTrace] = []
    trace_index = 0
    seen_ids: dict[str, int] = {}
    with opener as fh:
        try:
            for _, element in ET.iterparse(fh, events=("end",)):
                if _local(element.tag) != "trace":
                    continue
                case_id = _concept_name(element)
                if case_id is None:
                    raise LogFormatError(
                        f"{path}: trace {trace_index} has no concept:name")
                if case_id in seen_ids:
                    seen_ids[case_id] += 1
                    case_id = f"{case_id}#{seen_ids[case_id]}"
                else:
                    seen_ids[case_id] = 0
                activities: list[str] = []
                for child in element:
                    if _local(child.tag) != "event":
                        continue
                    name = _concept_name(child)
                    if name is None:
                        raise LogFormatError(
                            f"{path}: trace {trace_index} has an event with no concept:name")
                    if name == STOP:
                        raise LogFormatError(
                            f"{path}: trace {trace_index} uses the reserved activity name {STOP!r}")
                    activities.append(name)
                if activities:
                    out.append(CaseTrace(case_id, tuple(activities) + (STOP,)))
                trace_index += 1
                element.clear()
        except ET.ParseError as e:
            raise LogFormatError(f"{path}: bad XML: {e}") from None
    if not out:
        raise LogFormatError(f"{path}: no traces with events")
    return out


# -- dispatch ---------------------------------------------------------------

def load_log(path: PathLike) -> list[CaseTrace]:
    """Pick a reader from the file name: .csv, .jsonl, .xes, .xes.gz."""
    name = str(path).lower()
    if name.endswith(".csv"):
        return read_csv(path)
    if name.endswith(".jsonl"):
        return read_jsonl(path)
    if name.endswith(".xes") or name.endswith(".xes.gz"):
        return read_xes(path)
    raise LogFormatError(f"{path}: unsupported extension (use .csv, .jsonl, .xes, .xes.gz)")


def write_log(log: Sequence[CaseTrace], path: PathLike) -> None:
    name = str(path).lower()
    if name.endswith(".csv"):
        return write_csv(log, path)
    if name.endswith(".jsonl"):
        return write_jsonl(log, path)
    raise LogFormatError(f"{path}: unsupported output extension (use .csv, .jsonl)")


# -- statistics ---------------------------------------------------------------

@dataclass(frozen=True)
class LogStats:
    """Dataset summary; the stop symbol is excluded from all numbers."""

    n_activities: int
    n_cases: int
    avg_case_length: float
    n_events: int


def log_stats(log: Sequence[CaseTrace]) -> LogStats:
    activities: set[str] = set()
    n_events = 0
    for trace in log:
        body = trace.body
        activities.update(body)
        n_events += len(body)
    n_cases = len(log)
    return LogStats(
        n_activities=len(activities),
        n_cases=n_cases,
        avg_case_length=n_events / n_cases if n_cases else 0.0,
        n_events=n_events,
    )
