"""Exhaustive grid search of a bound over the (h, D) box.

The default box is 1.5 < h <= 86 ft, 28 <= D <= 125 ft.  The open lower end
in h is discretised as ``h_min + h_step``.  Rows of constant h are evaluated
as one vectorised call each, whether serially or on a thread pool, so every
grid value is computed identically in both cases and the reduction (ties
broken toward the smallest h, then the smallest D) is deterministic.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError
from .transmission import Sense

BOX_H_RANGE = (1.5, 86.0)
BOX_D_RANGE = (28.0, 125.0)
DEFAULT_H_STEP = 0.5
DEFAULT_D_STEP = 1.0


@dataclass(frozen=True)
class OptResult:
    objective_value: float
    arg_h_ft: float
    arg_D_ft: float
    objective_sense: Sense
    grid_steps: tuple[float, float]
    alpha_deg: float
    n_points: int


def grid_axis(lo: float, hi: float, step: float, open_lower: bool) -> np.ndarray:
    if not step > 0:
        raise ParameterError(f"grid step must be > 0, got {step}")
    if hi < lo:
        raise ParameterError(f"empty range [{lo}, {hi}]")
    last = math.floor((hi - lo) / step + 1e-9)
    first = 1 if open_lower else 0
    return lo + step * np.arange(first, last + 1, dtype=float)


def _check_box(h_range, D_range, h_open_lower):
    h_lo, h_hi = h_range
    d_lo, d_hi = D_range
    ph_lo, ph_hi = BOX_H_RANGE
    pd_lo, pd_hi = BOX_D_RANGE
    h_ok = (h_lo > ph_lo or (h_lo == ph_lo and h_open_lower)) and h_hi <= ph_hi
    if not (h_ok and pd_lo <= d_lo and d_hi <= pd_hi):
        raise ParameterError(
            f"box h={h_range}, D={D_range} leaves 1.5 < h <= 86, 28 <= D <= 125; pass unsafe_box=True to allow")


def optimize_bound(bound: Callable[..., np.ndarray], sense: Sense = Sense.MIN,
                   h_range: tuple[float, float] = BOX_H_RANGE,
                   D_range: tuple[float, float] = BOX_D_RANGE,
                   h_step: float = DEFAULT_H_STEP, D_step: float = DEFAULT_D_STEP,
                   alpha_deg: float = 90.0, h_open_lower: bool = True,
                   unsafe_box: bool = False, workers: Optional[int] = None) -> OptResult:
    """Minimise or maximise ``bound(h, D, alpha_deg)`` on a regular grid.

    Parameters
    ----------
    bound
        Vectorised in ``D`` for scalar ``h``; see
        :func:`v2vint.interference.bound_function`.
    h_open_lower
        Exclude ``h_range[0]`` itself (the box is open at the bottom in h).
    workers
        Thread count for row evaluation; ``None`` or 1 runs serially.
    """
    sense = Sense(sense)
    if sense is Sense.POINT:
        raise ParameterError("optimisation sense must be MIN or MAX")
    if not unsafe_box:
        _check_box(h_range, D_range, h_open_lower)
    hs = grid_axis(h_range[0], h_range[1], h_step, h_open_lower)
    Ds = grid_axis(D_range[0], D_range[1], D_step, False)
    if hs.size == 0 or Ds.size == 0:
        raise ParameterError("empty grid")

    def row(h):
        return np.asarray(bound(float(h), Ds, alpha_deg), dtype=float)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, hs))
    else:
        rows = [row(h) for h in hs]
    values = np.vstack(rows)
    if not np.all(np.isfinite(values)):
        raise ParameterError("bound is not finite on the whole grid")
    # argmin/argmax return the first hit in row-major order: smallest h, then smallest D
    flat = int(np.argmin(values) if sense is Sense.MIN else np.argmax(values))
    i, j = np.unravel_index(flat, values.shape)
    return OptResult(float(values[i, j]), float(hs[i]), float(Ds[j]), sense,
                     (float(h_step), float(D_step)), float(alpha_deg), int(values.size))
