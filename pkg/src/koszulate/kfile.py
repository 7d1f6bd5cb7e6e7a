"""JSON files for subspaces K ⊆ ∧²V (KFile) and for V̄^∨ ⊆ V^∨.

KFile::

    {"n": 4, "field": {"kind": "prime", "p": "3"}, "pairs_order": "lex",
     "basis": [["1", "0", "0", "0", "0", "1"], ...]}

Coefficients are decimal or ``"a/b"`` strings so big values survive the
round trip. A V̄^∨ file has the same shape minus ``pairs_order``, with rows
of length ``n``.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from math import comb
from pathlib import Path

from .fields import FieldConfig
from .linalg import SparseMatrix
from .subspace import RankDeficient, Subspace2


_COEFF = re.compile(r"-?\d+(/\d+)?")


class KFileError(ValueError):
    pass


def _parse_rows(rows, width: int, field: FieldConfig) -> list[list[object]]:
    if not isinstance(rows, list):
        raise KFileError("'basis' must be an array of arrays")
    out = []
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise KFileError(f"basis row {k} must have exactly {width} entries")
        parsed = []
        for x in row:
            if not isinstance(x, str) or not _COEFF.fullmatch(x.strip()):
                raise KFileError(f"coefficients must be integer or 'a/b' strings, got {x!r}")
            try:
                parsed.append(field(Fraction(x)))
            except (ValueError, ZeroDivisionError) as exc:
                raise KFileError(f"bad coefficient {x!r}: {exc}") from None
        out.append(parsed)
    return out


def _header(doc) -> tuple[int, FieldConfig]:
    if not isinstance(doc, dict):
        raise KFileError("document must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise KFileError("'n' must be a positive integer")
    try:
        field = FieldConfig.from_json(doc.get("field"))
    except ValueError as exc:
        raise KFileError(str(exc)) from None
    return n, field


def subspace_from_json(doc) -> Subspace2:
    n, field = _header(doc)
    if doc.get("pairs_order") != "lex":
        raise KFileError("'pairs_order' must be \"lex\"")
    rows = _parse_rows(doc.get("basis"), comb(n, 2), field)
    try:
        return Subspace2(n, SparseMatrix.from_dense(rows, field, ncols=comb(n, 2)))
    except RankDeficient as exc:
        raise KFileError(str(exc)) from None


def subspace_to_json(K: Subspace2) -> dict:
    f = K.field
    return {
        "n": K.n,
        "field": f.to_json(),
        "pairs_order": "lex",
        "basis": [[f.format(v) for v in row] for row in K.basis.to_dense()],
    }


def vector_space_from_json(doc) -> tuple[int, FieldConfig, SparseMatrix]:
    n, field = _header(doc)
    rows = _parse_rows(doc.get("basis"), n, field)
    return n, field, SparseMatrix.from_dense(rows, field, ncols=n)


def vector_space_to_json(n: int, rows, field: FieldConfig) -> dict:
    return {"n": n, "field": field.to_json(),
            "basis": [[field.format(field(x)) for x in r] for r in rows]}


def load_json(path: str | os.PathLike):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise KFileError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise KFileError(f"{path} is not valid JSON: {exc}") from None


def read_kfile(path) -> Subspace2:
    return subspace_from_json(load_json(path))


def write_json_atomic(path, doc) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_kfile(path, K: Subspace2) -> None:
    write_json_atomic(path, subspace_to_json(K))
