"""CSV emission and number formatting."""
from __future__ import annotations

import csv
import io
import math
import numbers
import sys
from pathlib import Path
from typing import Callable, Iterable, Sequence


def round12(x):
    """Round a real to 12 significant digits; integers, bools and text pass through."""
    if isinstance(x, (bool, numbers.Integral)) or not isinstance(x, numbers.Real):
        return x
    x = float(x)
    return x if not math.isfinite(x) else float(f"{x:.12g}")


def fmt12(x) -> str:
    """12 significant digits, always readable back as a float ("1.0", not "1")."""
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        return str(x)
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if math.isnan(x) or math.isinf(x):
        return repr(float(x))
    return repr(float(f"{x:.12g}"))


def fmt_full(x) -> str:
    """Shortest repr that round-trips exactly."""
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        return str(x)
    if isinstance(x, numbers.Integral):
        return str(int(x))
    return repr(float(x))


def csv_text(header: Sequence[str], rows: Iterable[Sequence], fmt: Callable = fmt_full) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence], fmt: Callable = fmt_full) -> str:
    """Write to ``path`` (``None`` or ``"-"`` means stdout) and return the text."""
    text = csv_text(header, rows, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")
    return text
