"""Bit-stable JSON and CSV reports with an embedded run manifest."""
from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field

from .runtime import JobMetrics

PRECISION = 2


def round_time(x):
    return None if x is None else round(x, PRECISION)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Everything that determines a report's content."""

    config: dict
    input_digest: str | None = None
    tool_version: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "config": self.config,
            "input_sha256": self.input_digest,
            "tool": "mrapriori",
            "tool_version": self.tool_version,
            **self.extra,
        }


def job_to_json(job: JobMetrics) -> dict:
    return {
        "name": job.name,
        "makespan": round_time(job.makespan),
        "tasks": [
            {
                "id": r.task_id,
                "kind": r.kind.value,
                "node": r.node,
                "start": round_time(r.start),
                "end": round_time(r.end),
                "speculative": r.is_speculative,
                "killed": r.was_killed,
                "local": r.was_local,
            }
            for r in job.records
        ],
        "per_node": [
            {
                "name": a.name,
                "kind": a.kind.value,
                "map_tasks": a.map_tasks,
                "mean_map_duration": round_time(a.mean_map_duration),
                "busy_time": round_time(a.busy_time),
            }
            for a in job.per_node()
        ],
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def tasks_csv(jobs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["job", "id", "kind", "node", "start", "end", "speculative", "killed", "local"])
    for job in jobs:
        for r in job.records:
            w.writerow([
                job.name, r.task_id, r.kind.value, r.node,
                f"{r.start:.{PRECISION}f}", f"{r.end:.{PRECISION}f}",
                int(r.is_speculative), int(r.was_killed), int(r.was_local),
            ])
    return buf.getvalue()


def mining_report(result, manifest: RunManifest) -> dict:
    return {
        "manifest": manifest.to_json(),
        "min_count": result.min_count,
        "levels": [{"k": lv.k, "count": len(lv)} for lv in result.levels],
        "total_makespan": round_time(result.total_makespan),
        "jobs": [job_to_json(j) for j in result.jobs],
    }


def write_report(path, report: dict, jobs, fmt="json"):
    """Write ``report`` as JSON, or the task table of ``jobs`` as CSV."""
    text = dumps(report) if fmt == "json" else tasks_csv(jobs)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
