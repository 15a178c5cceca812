"""Cell/time budgets gating the stretch-scale computations."""

from __future__ import annotations

import time

from .errors import BudgetExceededError


class Budget:
    """Tracks a cell allowance and a wall-clock deadline.

    ``charge(n)`` raises BudgetExceededError once either limit is hit;
    the caller is responsible for emitting whatever partial artifacts
    the pipeline contract requires before unwinding.
    """

    def __init__(self, max_cells: int | None = None, max_seconds: float | None = None):
        self.max_cells = max_cells
        self.max_seconds = max_seconds
        self.cells_used = 0
        self.started = time.monotonic()

    def charge(self, n: int = 1, what: str = "cells") -> None:
        self.cells_used += n
        if self.max_cells is not None and self.cells_used > self.max_cells:
            raise BudgetExceededError(
                f"cell budget exceeded: {self.cells_used} > {self.max_cells} ({what})")
        if self.max_seconds is not None and time.monotonic() - self.started > self.max_seconds:
            raise BudgetExceededError(
                f"time budget exceeded: {self.max_seconds}s ({what})")

    def remaining_cells(self) -> int | None:
        if self.max_cells is None:
            return None
        return max(0, self.max_cells - self.cells_used)
