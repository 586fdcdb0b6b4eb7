"""JSON interchange for families, designs and lift inputs.

Designs can also be written as JSON Lines: a header object ``{v, k, lambda}``
followed by one block (a JSON array) per line.  ``read_design`` accepts both.
"""
from __future__ import annotations

import io
import json
import sys
from typing import IO, Any, Iterable

import numpy as np

from .algebra import Subgroup, field_from_descriptor, group_from_descriptor
from .families import Design, RelativeDifferenceFamily, StrongDifferenceFamily
from .lifting import LiftInput


class SchemaError(ValueError):
    """Malformed input; ``path`` locates the offending value (``$.blocks[2]``)."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _get(obj, key: str, path: str = "$"):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    return obj[key]


def _int(obj, key: str, path: str = "$") -> int:
    val = _get(obj, key, path)
    if isinstance(val, bool) or not isinstance(val, int):
        raise SchemaError(f"{path}.{key}", f"expected an integer, got {val!r}")
    return val


def _guard(path: str, fn, *args):
    """Run ``fn`` and re-raise domain errors as SchemaError at ``path``."""
    try:
        return fn(*args)
    except SchemaError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise SchemaError(path, str(exc)) from exc


def _blocks(obj, path: str = "$") -> list:
    blocks = _get(obj, "blocks", path)
    if not isinstance(blocks, list):
        raise SchemaError(f"{path}.blocks", "expected a list of blocks")
    for i, b in enumerate(blocks):
        if not isinstance(b, list):
            raise SchemaError(f"{path}.blocks[{i}]", "expected a list")
    return blocks


def _decode_blocks(group, blocks, path):
    out = []
    for i, b in enumerate(blocks):
        row = []
        for j, x in enumerate(b):
            row.append(_guard(f"{path}[{i}][{j}]", lambda v: group.element(group.index(group.from_json(v))), x))
        out.append(tuple(row))
    return out


# ------------------------------------------------------------------ sources

def read_text(src) -> str:
    if src is None or src == "-":
        return sys.stdin.read()
    if hasattr(src, "read"):
        return src.read()
    with open(src) as fh:
        return fh.read()


def load_json(src) -> Any:
    text = read_text(src)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dump_json(obj, fh: IO[str] | None = None, indent: int | None = None):
    fh = fh or sys.stdout
    json.dump(obj, fh, indent=indent)
    fh.write("\n")


# ---------------------------------------------------------------- families

def sdf_to_json(sdf: StrongDifferenceFamily) -> dict:
    G = sdf.group
    return {"group": G.descriptor(), "k": sdf.k, "mu": sdf.mu,
            "blocks": [[G.to_json(x) for x in b] for b in sdf.blocks]}


def sdf_from_json(obj) -> StrongDifferenceFamily:
    G = _guard("$.group", group_from_descriptor, _get(obj, "group"))
    blocks = _decode_blocks(G, _blocks(obj), "$.blocks")
    return _guard("$", StrongDifferenceFamily, G, blocks, _int(obj, "k"), _int(obj, "mu"))


def df_to_json(df: RelativeDifferenceFamily) -> dict:
    G = df.group
    return {"group": G.descriptor(), "subgroup": df.subgroup.descriptor(), "k": df.k,
            "lambda": df.lam, "blocks": [[G.to_json(x) for x in b] for b in df.blocks]}


def df_from_json(obj) -> RelativeDifferenceFamily:
    G = _guard("$.group", group_from_descriptor, _get(obj, "group"))
    N = _guard("$.subgroup", Subgroup.from_descriptor, G, obj.get("subgroup", {"kind": "trivial"}))
    blocks = _decode_blocks(G, _blocks(obj), "$.blocks")
    return _guard("$", RelativeDifferenceFamily, G, N, blocks, _int(obj, "k"), _int(obj, "lambda"))


# ------------------------------------------------------------------ designs

def design_to_json(design: Design) -> dict:
    return {"v": design.v, "k": design.k, "lambda": design.lam, "blocks": design.blocks.tolist()}


def _design_header(obj, path="$") -> tuple[int, int, int]:
    return _int(obj, "v", path), _int(obj, "k", path), _int(obj, "lambda", path)


def _block_array(rows: list, k: int, path: str) -> np.ndarray:
    for i, b in enumerate(rows):
        if not isinstance(b, list) or len(b) != k:
            raise SchemaError(f"{path}[{i}]", f"expected a list of {k} integers")
    try:
        return np.array(rows, dtype=np.int64).reshape(-1, k)
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, "blocks must contain integers") from exc


def design_from_json(obj) -> Design:
    v, k, lam = _design_header(obj)
    return Design(v, k, lam, _block_array(_blocks(obj), k, "$.blocks"))


def write_design_jsonl(design: Design, fh: IO[str] | None = None):
    """Stream a design as a header line plus one block per line."""
    fh = fh or sys.stdout
    fh.write(json.dumps({"v": design.v, "k": design.k, "lambda": design.lam,
                         "b": len(design.blocks)}) + "\n")
    for row in design.blocks:
        fh.write(json.dumps(row.tolist()) + "\n")


def _iter_jsonl(lines: Iterable[str]):
    for n, line in enumerate(lines, 1):
        if line.strip():
            try:
                yield n, json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {n}", f"invalid JSON ({exc.msg})") from exc


def read_design(src) -> Design:
    """Load a design from a JSON object or from the JSON Lines stream format."""
    text = read_text(src)
    try:
        return design_from_json(json.loads(text))
    except json.JSONDecodeError:
        pass
    rows = _iter_jsonl(io.StringIO(text))
    try:
        _, header = next(rows)
    except StopIteration:
        raise SchemaError("$", "empty design stream") from None
    v, k, lam = _design_header(header, "line 1")
    return Design(v, k, lam, _block_array([r for _, r in rows], k, "blocks"))


# ------------------------------------------------------------- lift inputs

def lift_input_to_json(inp: LiftInput) -> dict:
    G, F = inp.group, inp.field
    return {"group": G.descriptor(), "field": F.descriptor(), "e": inp.e, "d": inp.d,
            "lambda": inp.lam,
            "F_blocks": [[G.to_json(x) for x in b] for b in inp.F_blocks],
            "Phi_blocks": [[F.encode(x) for x in b] for b in inp.Phi_blocks]}


def lift_input_from_json(obj) -> LiftInput:
    G = _guard("$.group", group_from_descriptor, _get(obj, "group"))
    F = _guard("$.field", field_from_descriptor, _get(obj, "field"))
    fb = _get(obj, "F_blocks")
    pb = _get(obj, "Phi_blocks")
    F_blocks = _decode_blocks(G, fb, "$.F_blocks")
    Phi = [tuple(_guard(f"$.Phi_blocks[{i}][{j}]", F.decode, x) for j, x in enumerate(b))
           for i, b in enumerate(pb)]
    return _guard("$", LiftInput, G, F, _int(obj, "e"), _int(obj, "d"), _int(obj, "lambda"), F_blocks, Phi)
