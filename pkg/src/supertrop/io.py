"""Text and JSON serialization of scalars, vectors and matrices.

Text format: one row per line, whitespace-separated tokens (``-`` zero,
``p`` or ``p/q`` tangible, suffix ``g`` ghost).  Blank lines and anything
after ``#`` are ignored.  JSON format: array of rows of
``{"v": "p/q" | null, "g": bool}``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError, RaggedRows
from .matrix import TropMatrix, TropVector
from .scalar import ZERO, Scalar, format_scalar, parse_scalar

__all__ = [
    "parse_matrix",
    "format_matrix",
    "parse_vector",
    "format_vector",
    "scalar_to_json",
    "scalar_from_json",
    "matrix_to_json",
    "matrix_from_json",
]


def scalar_to_json(a: Scalar) -> dict:
    return {"v": None if a.value is None else str(a.value), "g": a.ghost}


def scalar_from_json(obj) -> Scalar:
    if not isinstance(obj, dict) or "v" not in obj:
        raise ParseError(f"expected {{'v': ..., 'g': ...}}, got {obj!r}")
    v = obj["v"]
    if v is None:
        if obj.get("g"):
            raise ParseError("zero cannot be ghost")
        return ZERO
    if not isinstance(v, str):
        raise ParseError(f"scalar value must be a string, got {v!r}")
    try:
        value = Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad scalar value {v!r}") from None
    return Scalar(value, bool(obj.get("g", False)))


def matrix_to_json(M: TropMatrix) -> list:
    return [[scalar_to_json(a) for a in row] for row in M]


def matrix_from_json(data) -> TropMatrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("JSON matrix must be an array of arrays")
    rows = [[scalar_from_json(x) for x in r] for r in data]
    width = len(rows[0]) if rows else 0
    for i, r in enumerate(rows):
        if len(r) != width:
            raise RaggedRows(f"row has {len(r)} entries, expected {width}", line=i + 1, column=1)
    return TropMatrix(rows, cols=width)


def _tokenize(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        toks = []
        col = 0
        for piece in body.split():
            col = body.index(piece, col)
            toks.append((piece, col + 1))
            col += len(piece)
        if toks:
            yield lineno, toks


def parse_matrix(text: str) -> TropMatrix:
    """Parse the text or JSON matrix format (JSON is detected by a leading ``[``)."""
    if text.lstrip().startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
        return matrix_from_json(data)
    rows = []
    width = None
    for lineno, toks in _tokenize(text):
        row = []
        for tok, col in toks:
            try:
                row.append(parse_scalar(tok))
            except ParseError:
                raise ParseError(f"bad scalar token {tok!r}", line=lineno, column=col) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedRows(f"row has {len(row)} entries, expected {width}", line=lineno, column=1)
        rows.append(row)
    return TropMatrix(rows, cols=width or 0)


def format_matrix(M: TropMatrix, mode: str = "text") -> str:
    if mode == "json":
        return json.dumps(matrix_to_json(M))
    if mode != "text":
        raise ValueError(f"unknown format mode {mode!r}")
    return "\n".join(" ".join(format_scalar(a) for a in row) for row in M)


def parse_vector(text: str) -> TropVector:
    """A vector file holds a single row or a single column of tokens (or a JSON array)."""
    if text.lstrip().startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
        if isinstance(data, list) and data and isinstance(data[0], list):
            data = [x for r in data for x in r]
        if not isinstance(data, list):
            raise ParseError("JSON vector must be an array")
        return TropVector(scalar_from_json(x) for x in data)
    M = parse_matrix(text)
    if M.rows > 1 and M.cols > 1:
        raise ParseError(f"vector file must be a single row or column, got shape {M.shape}")
    return TropVector(M.entries())


def format_vector(v: TropVector, mode: str = "text") -> str:
    if mode == "json":
        return json.dumps([scalar_to_json(a) for a in v])
    return " ".join(format_scalar(a) for a in v)
