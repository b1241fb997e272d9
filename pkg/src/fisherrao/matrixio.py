"""Plain-text matrix files shared by the library and the CLI.

Format: the first significant line holds the integer dimension p; the next p
significant lines hold p whitespace-separated decimal floats each.  Lines
whose first non-blank character is '#' are comments; blank lines are ignored.
Parsing is strict (wrong row or column counts are errors, never padded) and
locale-independent (dot decimal separator only).
"""

from __future__ import annotations

import numpy as np

from .errors import MatrixFormatError
from .symmat import SpdMatrix, SymmetricMatrix


def fmt_float(x: float) -> str:
    """15 significant digits, falling back to the shortest round-trip form."""
    s = f"{float(x):.15g}"
    return s if float(s) == float(x) else repr(float(x))


def parse_matrix(text: str, source: str = "<string>") -> np.ndarray:
    """Parse the matrix text format into a (p, p) float array."""
    dim = None
    rows: list[list[float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if dim is None:
            fields = line.split()
            if len(fields) != 1:
                raise MatrixFormatError(source, lineno, "expected a single integer dimension")
            try:
                dim = int(fields[0])
            except ValueError:
                raise MatrixFormatError(
                    source, lineno, f"expected an integer dimension, got {fields[0]!r}"
                ) from None
            if dim < 1:
                raise MatrixFormatError(source, lineno, f"dimension must be >= 1, got {dim}")
            continue
        if len(rows) == dim:
            raise MatrixFormatError(source, lineno, f"unexpected content after {dim} rows")
        fields = line.split()
        if len(fields) != dim:
            raise MatrixFormatError(
                source, lineno, f"expected {dim} values in row {len(rows) + 1}, got {len(fields)}"
            )
        row = []
        for field in fields:
            try:
                value = float(field)
            except ValueError:
                raise MatrixFormatError(source, lineno, f"invalid float {field!r}") from None
            if not np.isfinite(value):
                raise MatrixFormatError(source, lineno, f"non-finite value {field!r}")
            row.append(value)
        rows.append(row)
    last = len(text.splitlines())
    if dim is None:
        raise MatrixFormatError(source, last + 1, "missing dimension header")
    if len(rows) != dim:
        raise MatrixFormatError(
            source, last + 1, f"expected {dim} rows, found {len(rows)}"
        )
    return np.array(rows, dtype=float)


def format_matrix(matrix, comment: str | None = None) -> str:
    """Render an array (or matrix value) in the matrix text format."""
    arr = np.asarray(matrix, dtype=float)
    lines = []
    if comment is not None:
        lines.append(f"# {comment}")
    lines.append(str(arr.shape[0]))
    for row in arr:
        lines.append(" ".join(fmt_float(v) for v in row))
    return "\n".join(lines) + "\n"


def read_symmetric_matrix(path) -> SymmetricMatrix:
    """Read a file in the matrix text format as a SymmetricMatrix."""
    with open(path, "r", encoding="utf-8") as fh:
        arr = parse_matrix(fh.read(), source=str(path))
    try:
        return SymmetricMatrix(arr)
    except ValueError as exc:
        raise MatrixFormatError(str(path), 0, str(exc)) from exc


def read_spd_matrix(path) -> SpdMatrix:
    """Read a file in the matrix text format as an SpdMatrix.

    Raises MatrixFormatError for malformed content and NotPositiveDefinite
    (unwrapped, so callers can distinguish it) for a well-formed matrix
    outside the cone.
    """
    return SpdMatrix(read_symmetric_matrix(path))


def write_matrix(path, matrix, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(matrix, comment=comment))
