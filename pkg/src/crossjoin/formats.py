"""Text and JSON-lines formats for cycles."""

from __future__ import annotations

import json
from typing import Iterable, TextIO

from .cycles import DeBruijnCycle, validate
from .errors import DomainError
from .graph import DigraphParams


def parse_int_list(text: str) -> list[int]:
    """Parse ``"0,1,3,7"`` (spaces allowed) into integers."""
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise DomainError(f"not a comma-separated integer list: {text!r}") from exc


def parse_cycle(params: DigraphParams, text: str) -> DeBruijnCycle:
    text = text.strip()
    raw = json.loads(text) if text.startswith("[") else parse_int_list(text)
    return validate(params, raw)


def write_cycles_jsonl(fh: TextIO, params: DigraphParams, cycles: Iterable[DeBruijnCycle]) -> int:
    """Header line ``{"N":..,"d":..}`` then one JSON array per cycle. Returns the count."""
    fh.write(json.dumps({"N": params.N, "d": params.d}) + "\n")
    n = 0
    for c in cycles:
        fh.write(json.dumps(list(c.vertices)) + "\n")
        n += 1
    return n


def read_cycles_jsonl(lines: Iterable[str]) -> tuple[DigraphParams, list[DeBruijnCycle]]:
    """Inverse of :func:`write_cycles_jsonl`.

    Also accepts Algorithm H result files, whose records are objects with a
    ``cycle`` key.
    """
    it = (ln for ln in lines if ln.strip())
    try:
        head = json.loads(next(it))
        params = DigraphParams(int(head["N"]), int(head["d"]))
    except (StopIteration, KeyError, TypeError, ValueError) as exc:
        raise DomainError("missing or malformed cycles-file header") from exc
    cycles = []
    for lineno, ln in enumerate(it, 2):
        try:
            rec = json.loads(ln)
        except json.JSONDecodeError as exc:
            raise DomainError(f"line {lineno}: not JSON") from exc
        if isinstance(rec, dict):
            rec = rec.get("cycle")
        if not isinstance(rec, list):
            raise DomainError(f"line {lineno}: expected a vertex array")
        cycles.append(validate(params, rec))
    return params, cycles
