"""CSV output with a fixed, reproducible number format."""

from __future__ import annotations

import csv
import io
import os
from typing import Sequence

import numpy as np


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def csv_text(header: Sequence[str], columns: Sequence) -> str:
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    if len({len(c) for c in cols}) > 1:
        raise ValueError("CSV columns differ in length")
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([format_float(v) for v in row] for row in zip(*cols))
    return buf.getvalue()


def write_csv(target, header: Sequence[str], columns: Sequence) -> None:
    """Write columns under ``header`` to a path or text stream (UTF-8, LF)."""
    text = csv_text(header, columns)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        target.write(text)


def read_csv(source) -> dict[str, np.ndarray]:
    """Parse a file written by :func:`write_csv` into named columns."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(source))
    header = rows[0]
    data = np.array(rows[1:], dtype=float).reshape(-1, len(header))
    return {name: data[:, k] for k, name in enumerate(header)}


def write_path_csv(target, path, value_name: str = "B") -> None:
    write_csv(target, ["t", value_name], [path.partition, path.values])
