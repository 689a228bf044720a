"""Delimited and JSON emission of rate records.

CSV files open with '#'-prefixed comment lines echoing the effective
configuration (sorted keys, JSON-encoded values), then a header row, then
one row per record. Floats are written with 17 significant digits so a
parse-back reproduces them bit-exactly. Output carries no timestamps:
re-running a command with the same inputs is byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, fields

from .rates import RateRecord

COLUMNS = tuple(f.name for f in fields(RateRecord))

CAPACITY_COLUMNS = ("L_km", "n", "N", "eta_total", "plob", "repeater_cap", "error")


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return "%.17g" % v
    return str(v)


def _config_lines(config_echo: dict) -> list[str]:
    return [
        f"# {key} = {json.dumps(value)}"
        for key, value in sorted(config_echo.items())
    ]


def render_csv(rows: list[dict], columns: tuple, config_echo: dict | None) -> str:
    buf = io.StringIO()
    if config_echo:
        for line in _config_lines(config_echo):
            buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(col)) for col in columns])
    return buf.getvalue()


def records_to_rows(records: list[RateRecord]) -> list[dict]:
    return [asdict(r) for r in records]


def write_csv(
    path: str,
    records: list[RateRecord],
    config_echo: dict | None = None,
) -> None:
    text = render_csv(records_to_rows(records), COLUMNS, config_echo)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_csv(path: str) -> tuple[list[dict], dict]:
    """Parse a file written by render_csv back into rows + config echo."""
    config: dict = {}
    rows: list[dict] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header: list[str] | None = None
        for line in csv.reader(_strip_comments(fh, config), lineterminator="\n"):
            if header is None:
                header = line
                continue
            rows.append(dict(zip(header, line)))
    return rows, config


def _strip_comments(fh, config: dict):
    for raw in fh:
        if raw.startswith("# "):
            key, _, value = raw[2:].rstrip("\n").partition(" = ")
            config[key] = json.loads(value)
            continue
        yield raw
