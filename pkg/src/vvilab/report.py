"""Report assembly, canonical serialization and rendering.

Reports are schema-versioned dictionaries.  JSON output is canonical
(sorted keys, fixed indentation), so two runs with identical inputs produce
byte-identical files except for the ``runtime_ms`` field.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Optional

import jsonschema

from . import __version__

SCHEMA_ID = "vvilab-report-v1"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "tool_version", "command", "seed", "tol", "result", "exit_status"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "tool_version": {"type": "string"},
        "command": {"enum": ["catalog", "check", "solve", "verify", "replay"]},
        "seed": {"type": "integer"},
        "tol": {"type": "number"},
        "dini_schedule": {
            "type": "object",
            "required": ["t0", "ratio", "steps"],
            "properties": {
                "t0": {"type": "number"},
                "ratio": {"type": "number"},
                "steps": {"type": "integer"},
            },
        },
        "mode": {"type": ["string", "null"]},
        "hconvex_form": {"type": "string"},
        "instance": {"type": ["object", "null"]},
        "property": {"type": ["string", "null"]},
        "problem": {"type": ["string", "null"]},
        "theorem": {"type": ["string", "null"]},
        "result": {"type": "object"},
        "exit_status": {"enum": [0, 2]},
        "runtime_ms": {"type": "number"},
    },
    "additionalProperties": False,
}


def build_report(
    command: str,
    result: dict,
    exit_status: int,
    seed: int,
    tol: float,
    dini_schedule: dict,
    hconvex_form: str = "componentwise",
    mode: Optional[str] = None,
    instance: Optional[dict] = None,
    prop: Optional[str] = None,
    problem: Optional[str] = None,
    theorem: Optional[str] = None,
    runtime_ms: float = 0.0,
) -> dict:
    report = {
        "schema": SCHEMA_ID,
        "tool_version": __version__,
        "command": command,
        "seed": seed,
        "tol": tol,
        "dini_schedule": dini_schedule,
        "mode": mode,
        "hconvex_form": hconvex_form,
        "instance": instance,
        "property": prop,
        "problem": problem,
        "theorem": theorem,
        "result": result,
        "exit_status": exit_status,
        "runtime_ms": runtime_ms,
    }
    validate_report(report)
    return report


def validate_report(report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def strip_runtime(report: dict) -> dict:
    out = dict(report)
    out.pop("runtime_ms", None)
    return out


def _witness_lines(witness: dict, indent: str = "  ") -> list:
    lines = [f"{indent}witness ({witness['check']}), margin {witness['margin']:.6g}:"]
    for key, value in witness["data"].items():
        lines.append(f"{indent}  {key} = {value}")
    return lines


def to_text(report: dict) -> str:
    lines = [f"[{SCHEMA_ID}] {report['command']}  (tool {report['tool_version']})"]
    if report.get("instance"):
        inst = report["instance"]
        lines.append(f"instance: {inst.get('id', '?')}  manifold {inst.get('sampler', inst).get('manifold')}")
    lines.append(
        f"seed {report['seed']}  tol {report['tol']}  dini {report['dini_schedule']}"
        + (f"  mode {report['mode']}" if report.get("mode") else "")
    )
    result = report["result"]
    cmd = report["command"]
    if cmd == "catalog":
        for section in ("instances", "objectives", "bifunctions"):
            lines.append(f"{section}:")
            for entry in result[section]:
                tags = ", ".join(f"{p['tag']}[{p['provenance']}]" for p in entry.get("properties", []))
                lines.append(f"  {entry['id']}  [{entry.get('provenance', '-')}]  {tags}")
    elif cmd in ("check", "replay"):
        lines.append(f"property: {report['property']}")
        lines.append(f"verdict: {result['verdict']}  (samples checked: {result['samples_checked']})")
        if result.get("note"):
            lines.append(f"note: {result['note']}")
        if result.get("witness"):
            lines.extend(_witness_lines(result["witness"]))
    elif cmd == "solve":
        lines.append(f"problem: {result['problem']}  grid size {result['grid_size']}")
        lines.append(f"solutions ({len(result['solutions'])}): {result['solutions']}")
        if result["marginal"]:
            lines.append(f"marginal ({len(result['marginal'])}): {result['marginal']}")
        if result.get("note"):
            lines.append(f"note: {result['note']}")
    elif cmd == "verify":
        lines.append(f"theorem: {result['theorem']}")
        lines.append(f"claim: {result['claim']}")
        lines.append("hypotheses:")
        for hyp in result["hypotheses"]:
            lines.append(f"  {hyp['name']:<34} {hyp['verdict']:<18} ({hyp['samples_checked']} samples)")
            if hyp.get("witness"):
                lines.extend(_witness_lines(hyp["witness"], indent="    "))
        lines.append(f"claim holds on grid: {result['claim_holds_on_grid']}")
        lines.append(f"status: {result['status']}  (covered by theorem: {result['covered_by_theorem']})")
        if result.get("witness"):
            lines.append(f"  claim witness: {result['witness']}")
        for note in result.get("notes", []):
            lines.append(f"note: {note}")
    lines.append(f"exit status: {report['exit_status']}")
    return "\n".join(lines) + "\n"


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    result = report["result"]
    cmd = report["command"]
    if cmd == "solve":
        writer.writerow(["problem", "grid_size", "tol", "kind", "coords"])
        for coords in result["solutions"]:
            writer.writerow([result["problem"], result["grid_size"], report["tol"], "solution", coords])
        for coords in result["marginal"]:
            writer.writerow([result["problem"], result["grid_size"], report["tol"], "marginal", coords])
    elif cmd in ("check", "replay"):
        writer.writerow(["property", "verdict", "samples_checked", "margin"])
        margin = result["witness"]["margin"] if result.get("witness") else ""
        writer.writerow([report["property"], result["verdict"], result["samples_checked"], margin])
    elif cmd == "verify":
        writer.writerow(["theorem", "item", "verdict"])
        for hyp in result["hypotheses"]:
            writer.writerow([result["theorem"], "hypothesis:" + hyp["name"], hyp["verdict"]])
        writer.writerow([result["theorem"], "claim", result["status"]])
    elif cmd == "catalog":
        writer.writerow(["section", "id", "provenance"])
        for section in ("instances", "objectives", "bifunctions"):
            for entry in result[section]:
                writer.writerow([section, entry["id"], entry.get("provenance", "")])
    return buf.getvalue()
