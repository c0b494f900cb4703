"""Matrix Market array-format I/O for dense symmetric matrices.

Writes ``%%MatrixMarket matrix array real symmetric`` with the lower
triangle in column-major order and 17 significant digits, which
round-trips binary64 values exactly.  Reading also accepts the ``general``
symmetry tag, in which case the full column-major data must be exactly
symmetric.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParseError, ShapeError
from ..types import SymMatrix

_HEADER = "%%MatrixMarket matrix array real symmetric"


def write_matrix(path, A: SymMatrix) -> None:
    n = A.n
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_HEADER + "\n")
        fh.write(f"{n} {n}\n")
        for j in range(n):
            for i in range(j, n):
                fh.write(f"{A.a[i, j]:.17g}\n")


def read_matrix(path) -> SymMatrix:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1)
    head = lines[0].split()
    if len(head) != 5 or head[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket header", line=1)
    obj, fmt, fieldkind, symmetry = (t.lower() for t in head[1:])
    if obj != "matrix" or fmt != "array":
        raise ParseError(f"unsupported layout {obj!r} {fmt!r}; need matrix array", line=1)
    if fieldkind != "real":
        raise ParseError(f"unsupported field {fieldkind!r}; need real", line=1)
    if symmetry not in ("symmetric", "general"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", line=1)

    lineno = 1
    idx = 1
    # comments and blank lines before the size line
    while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("%")):
        idx += 1
    if idx >= len(lines):
        raise ParseError("missing size line", line=len(lines) + 1)
    lineno = idx + 1
    parts = lines[idx].split()
    if len(parts) != 2:
        raise ParseError(f"size line must be 'rows cols', got {lines[idx]!r}", line=lineno)
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"non-integer size in {lines[idx]!r}", line=lineno) from None
    if rows != cols:
        raise ShapeError(f"matrix must be square, got {rows}x{cols}")
    if rows < 1:
        raise ParseError(f"dimension must be positive, got {rows}", line=lineno)
    n = rows
    needed = n * (n + 1) // 2 if symmetry == "symmetric" else n * n

    values: list[float] = []
    for idx in range(idx + 1, len(lines)):
        lineno = idx + 1
        text = lines[idx].strip()
        if not text or text.startswith("%"):
            continue
        for tok in text.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise ParseError(f"bad numeric value {tok!r}", line=lineno) from None
        if len(values) > needed:
            raise ParseError(f"more than {needed} data values", line=lineno)
    if len(values) < needed:
        raise ParseError(
            f"expected {needed} data values, found {len(values)}", line=len(lines) + 1
        )

    a = np.empty((n, n))
    k = 0
    if symmetry == "symmetric":
        for j in range(n):
            for i in range(j, n):
                a[i, j] = values[k]
                a[j, i] = values[k]
                k += 1
    else:
        for j in range(n):
            for i in range(n):
                a[i, j] = values[k]
                k += 1
        if not np.array_equal(a, a.T):
            raise ShapeError("general-format data is not symmetric")
    return SymMatrix(a, _trusted=True)
