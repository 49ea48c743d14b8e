"""Pool documents and report serialization."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Optional

from .errors import TeamScoreError
from .rv import Candidate, make_rv

CSV_COLUMNS = ("trial", "method", "team_value", "optimal_value", "ratio", "bound", "violation")


class ParseError(TeamScoreError):
    pass


def sig12(x):
    """Round a number to 12 significant digits for emitted reports."""
    if isinstance(x, bool) or not isinstance(x, float) or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def round_floats(obj):
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return sig12(obj)


def parse_pool(text: str) -> tuple[list[Candidate], Optional[int], Optional[int]]:
    try:
        doc = json.loads(text)
        entries = doc["candidates"]
        pool = [Candidate(str(e["id"]), make_rv(e["values"], e["masses"])) for e in entries]
        k, h = doc.get("k"), doc.get("h")
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed pool document: {exc}") from exc
    ids = [c.id for c in pool]
    if len(set(ids)) != len(ids):
        raise ParseError("candidate ids must be unique")
    return pool, k, h


def load_pool(path) -> tuple[list[Candidate], Optional[int], Optional[int]]:
    return parse_pool(Path(path).read_text())


def pool_document(pool, k: Optional[int] = None, h: Optional[int] = None) -> dict:
    # full precision: pools must re-ingest exactly
    doc: dict = {"candidates": [{"id": c.id, "values": list(c.rv.values),
                                 "masses": list(c.rv.masses)} for c in pool]}
    if k is not None:
        doc["k"] = k
    if h is not None:
        doc["h"] = h
    return doc


def write_pool(path, pool, k=None, h=None) -> None:
    Path(path).write_text(json.dumps(pool_document(pool, k, h), indent=2) + "\n")


def write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(round_floats(doc), indent=2) + "\n")


def write_ratio_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({c: sig12(row[c]) for c in CSV_COLUMNS})
