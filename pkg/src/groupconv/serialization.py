"""Reading and writing signals and Fourier matrices as CSV or JSON."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .representations import FourierMatrix

# 17 significant digits round-trip IEEE doubles exactly
_FLOAT_FORMAT = "%.17g"


def _fmt(x: float) -> str:
    return _FLOAT_FORMAT % float(x)


def write_signal_csv(path, values) -> None:
    """Write a complex vector as index,re,im rows with a header line."""
    values = np.asarray(values, dtype=complex).ravel()
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["index", "re", "im"])
        for i, v in enumerate(values):
            writer.writerow([i, _fmt(v.real), _fmt(v.imag)])


def read_signal_csv(path) -> np.ndarray:
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0][:3] != ["index", "re", "im"]:
        raise ValueError(f"{path}: expected a header line 'index,re,im'")
    out = np.empty(len(rows) - 1, dtype=complex)
    for row in rows[1:]:
        idx = int(row[0])
        if not 0 <= idx < out.size:
            raise ValueError(f"{path}: signal index {idx} out of range")
        out[idx] = float(row[1]) + 1j * float(row[2])
    return out


def write_signal_json(path, values) -> None:
    """Write a complex vector as a JSON list of [re, im] pairs."""
    values = np.asarray(values, dtype=complex).ravel()
    payload = {"values": [[v.real, v.imag] for v in values]}
    with open(path, "w") as handle:
        json.dump(payload, handle)
        handle.write("\n")


def read_signal_json(path) -> np.ndarray:
    with open(path) as handle:
        payload = json.load(handle)
    pairs = payload["values"] if isinstance(payload, dict) else payload
    return np.array([complex(re, im) for re, im in pairs])


def write_signal(path, values, fmt: str | None = None) -> None:
    if _resolve_format(path, fmt) == "json":
        write_signal_json(path, values)
    else:
        write_signal_csv(path, values)


def read_signal(path, fmt: str | None = None) -> np.ndarray:
    if _resolve_format(path, fmt) == "json":
        return read_signal_json(path)
    return read_signal_csv(path)


def _resolve_format(path, fmt: str | None) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".csv":
        return "csv"
    if fmt in ("csv", "json"):
        return fmt
    raise ValueError(f"cannot infer format for {path}; pass 'csv' or 'json'")


def write_matrix_csv(path, matrix) -> None:
    """Write a complex matrix as rows of interleaved re,im columns."""
    mat = np.asarray(matrix, dtype=complex)
    header = ["row"]
    for j in range(mat.shape[1]):
        header += [f"re{j}", f"im{j}"]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for r in range(mat.shape[0]):
            cells = [r + 1]
            for v in mat[r]:
                cells += [_fmt(v.real), _fmt(v.imag)]
            writer.writerow(cells)


def write_matrix_json(path, matrix) -> None:
    mat = np.asarray(matrix, dtype=complex)
    payload = {"matrix": [[[v.real, v.imag] for v in row] for row in mat]}
    with open(path, "w") as handle:
        json.dump(payload, handle)
        handle.write("\n")


def write_matrix(path, matrix, fmt: str | None = None) -> None:
    if _resolve_format(path, fmt) == "json":
        write_matrix_json(path, matrix)
    else:
        write_matrix_csv(path, matrix)


def write_fourier_csv(path, fourier: FourierMatrix) -> None:
    """Write a Fourier matrix with one row per basis vector.

    Columns are the 1-based row number, the "(irrep,j,k)" row label, and
    interleaved re,im pairs of the matrix entries.
    """
    mat = fourier.matrix
    n = mat.shape[1]
    header = ["row", "label"]
    for j in range(n):
        header += [f"re{j}", f"im{j}"]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for r in range(mat.shape[0]):
            label, j, k = fourier.row_index[r]
            cells = [r + 1, f"({label},{j},{k})"]
            for v in mat[r]:
                cells += [_fmt(v.real), _fmt(v.imag)]
            writer.writerow(cells)


def write_fourier_json(path, fourier: FourierMatrix) -> None:
    """Write a Fourier matrix with ``(irrep, j, k)`` row labels."""
    mat = fourier.matrix
    rows = [{"row": i + 1, "irrep": label, "j": j, "k": k}
            for i, (label, j, k) in enumerate(fourier.row_index)]
    payload = {
        "order": mat.shape[1],
        "rows": rows,
        "matrix": [[[v.real, v.imag] for v in row] for row in mat],
    }
    with open(path, "w") as handle:
        json.dump(payload, handle)
        handle.write("\n")


def write_fourier(path, fourier: FourierMatrix, fmt: str | None = None) -> None:
    if _resolve_format(path, fmt) == "json":
        write_fourier_json(path, fourier)
    else:
        write_fourier_csv(path, fourier)
