"""Plain-text matrix files.

Format: a header line ``m n field`` (field is ``real`` or ``complex``)
followed by ``m`` lines of ``n`` whitespace-separated entries.  Complex
entries are single tokens of the form ``re+imi`` or ``re-imi`` (for example
``1.5-0.25i``).  Floats are written with 17 significant digits, so a
write/read round trip reproduces every entry exactly.
"""

from __future__ import annotations

import numpy as np

__all__ = ["MatrixParseError", "format_entry", "read_matrix", "write_matrix"]


class MatrixParseError(ValueError):
    """A matrix file failed to parse; carries line and column positions."""

    def __init__(self, path, line: int, column: int, message: str):
        self.path = path
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {message}")


def format_entry(value, field: str) -> str:
    if field == "complex":
        z = complex(value)
        return f"{z.real:.17g}{z.imag:+.17g}i"
    return format(float(value), ".17g")


def _parse_entry(token: str, field: str):
    if field == "complex":
        if token.endswith("i"):
            return complex(token[:-1] + "j")
        return complex(float(token))
    if token.endswith("i"):
        raise ValueError("complex entry in a real matrix")
    return float(token)


def read_matrix(path) -> np.ndarray:
    """Read a matrix file; raises :class:`MatrixParseError` with line/column
    positions on any malformed content."""
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise MatrixParseError(path, 1, 1, "empty file, expected a header line 'm n field'")
    header = lines[0].split()
    if len(header) != 3:
        raise MatrixParseError(path, 1, 1, f"expected header 'm n field', got {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixParseError(path, 1, 1, f"dimensions must be integers, got {lines[0]!r}") from None
    field = header[2]
    if field not in ("real", "complex"):
        raise MatrixParseError(path, 1, 3, f"field must be 'real' or 'complex', got {field!r}")
    if m < 1 or n < 1:
        raise MatrixParseError(path, 1, 1, f"dimensions must be >= 1, got {m}x{n}")
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != m:
        raise MatrixParseError(path, min(len(lines), m + 1), 1, f"expected {m} rows, found {len(body)}")
    out = np.zeros((m, n), dtype=complex if field == "complex" else float)
    for i, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixParseError(path, i + 2, len(tokens) + 1 if len(tokens) < n else n + 1,
                                   f"expected {n} entries in row {i}, found {len(tokens)}")
        for j, token in enumerate(tokens):
            try:
                out[i, j] = _parse_entry(token, field)
            except ValueError as exc:
                raise MatrixParseError(path, i + 2, j + 1, f"bad entry {token!r}: {exc}") from None
    return out


def write_matrix(path, A) -> None:
    """Write a matrix file readable back by :func:`read_matrix`."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    field = "complex" if np.iscomplexobj(A) else "real"
    m, n = A.shape
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(f"{m} {n} {field}\n")
        for i in range(m):
            f.write(" ".join(format_entry(A[i, j], field) for j in range(n)) + "\n")
