"""CSV emission shared by the CLI: RFC-4180 style rows, '.' decimals, one
header row, '#'-prefixed metadata comments carrying the full config echo."""

from __future__ import annotations

import csv
import io
import json

from . import __version__


def format_cell(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(columns, rows, meta: dict) -> str:
    """CSV text with a comment header embedding the config and version."""
    buf = io.StringIO()
    buf.write(f"# kpzlab {__version__}\n")
    for key, value in meta.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, columns, rows, meta: dict):
    text = render_csv(columns, rows, meta)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_csv(path):
    """(meta, columns, rows) from a file written by write_csv; rows are
    lists of strings."""
    meta = {}
    with open(path, newline="") as fh:
        lines = []
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    meta[key.strip()] = val.strip()
                continue
            lines.append(line)
    reader = csv.reader(lines)
    table = list(reader)
    if not table:
        return meta, [], []
    return meta, table[0], table[1:]
