"""Round-trippable CSV plus the run manifest.

Floats are written with ``repr`` so ``parse(emit(x)) == x`` exactly.
"""

from __future__ import annotations

import csv
import json

from .errors import FormatError

VERSION = "0.1.0"


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Header and string rows; rows must all match the header width."""
    source = str(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(source, 0, "empty file") from None
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(
                    source, line_no,
                    f"expected {len(header)} columns, got {len(row)}",
                )
            rows.append(row)
    return header, rows


def write_manifest(path, verb: str, config: dict, seed) -> None:
    """Record what produced an output set (no timestamps, byte-stable)."""
    payload = {
        "verb": verb,
        "config": config,
        "seed": seed,
        "version": VERSION,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
