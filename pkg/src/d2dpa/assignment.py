"""Optimal one-to-one pairing of D2D pairs to CU channels on a rate table.

The maximum-weight assignment is delegated to scipy's rectangular
Kuhn-Munkres implementation; on top of it, ties between equally good
assignments are broken toward the lexicographically smallest row-to-column
mapping so outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass
class RateTable:
    """D x K table of achievable D2D rates with per-entry bookkeeping flags.

    Infeasible combinations carry rate zero so they never attract the
    assignment unless nothing better exists.
    """

    rates: np.ndarray
    sic_applied: np.ndarray = field(default=None)  # type: ignore[assignment]
    infeasible: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.rates = np.asarray(self.rates, dtype=float)
        if self.rates.ndim != 2:
            raise ValueError("rate table must be 2-D")
        d, k = self.rates.shape
        if d > k:
            raise ValueError(f"more D2D pairs ({d}) than CU channels ({k})")
        if self.sic_applied is None:
            self.sic_applied = np.zeros((d, k), dtype=bool)
        if self.infeasible is None:
            self.infeasible = np.zeros((d, k), dtype=bool)
        self.sic_applied = np.asarray(self.sic_applied, dtype=bool)
        self.infeasible = np.asarray(self.infeasible, dtype=bool)
        if self.sic_applied.shape != (d, k) or self.infeasible.shape != (d, k):
            raise ValueError("flag arrays must match the rate table shape")
        if (self.rates < 0.0).any():
            raise ValueError("rates must be nonnegative")
        if (self.rates[self.infeasible] != 0.0).any():
            raise ValueError("infeasible entries must carry rate 0")

    @property
    def shape(self) -> tuple[int, int]:
        return self.rates.shape


@dataclass(frozen=True)
class Assignment:
    """Injective mapping of table rows (D2D pairs) to columns (CU channels)."""

    pair_to_cu: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.pair_to_cu)) != len(self.pair_to_cu):
            raise ValueError("assignment must map rows to distinct columns")


def _optimal_total(rates: np.ndarray) -> float:
    if rates.shape[0] == 0:
        return 0.0
    rows, cols = linear_sum_assignment(rates, maximize=True)
    return float(rates[rows, cols].sum())


def hungarian_max(table: RateTable | np.ndarray) -> tuple[Assignment, float]:
    """Maximum-total assignment of rows to columns, lexicographically smallest.

    Requires no more rows than columns.  The total is the exact optimum; among
    all optimal assignments the returned one has the smallest column for row
    0, then for row 1, and so on.
    """
    rates = table.rates if isinstance(table, RateTable) else np.asarray(table, dtype=float)
    if rates.ndim != 2:
        raise ValueError("rate table must be 2-D")
    d, k = rates.shape
    if d > k:
        raise ValueError(f"more rows ({d}) than columns ({k})")
    if d == 0:
        return Assignment(()), 0.0

    total = _optimal_total(rates)
    tol = 1e-12 * max(1.0, abs(total))

    chosen: list[int] = []
    free_cols = list(range(k))
    sub = rates
    for _ in range(d):
        row_val = sub[0]
        rest = sub[1:]
        for idx, col in enumerate(free_cols):
            candidate = row_val[idx] + _optimal_total(np.delete(rest, idx, axis=1))
            fixed = sum(rates[r, c] for r, c in enumerate(chosen))
            if fixed + candidate >= total - tol:
                chosen.append(col)
                free_cols.pop(idx)
                sub = np.delete(rest, idx, axis=1)
                break
        else:
            raise RuntimeError("tie-break pass failed to reproduce the optimal total")
    return Assignment(tuple(chosen)), total
