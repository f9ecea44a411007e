"""Deterministic step counters.

Every budgeted operation draws from a `Budget`. A child budget charges its parent on
every tick, so a computation run under a budget of b is a prefix of the same
computation run under any larger budget. Nothing here looks at wall-clock time.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class BudgetExhausted(Exception):
    """Raised by `Budget.tick` once a counter passes its limit.

    Attributes:
        budget (Budget): The counter that ran out. Handlers compare it with their own
            budget and re-raise when an enclosing counter ran out instead.
    """

    def __init__(self, budget: Budget):
        super().__init__(f"budget of {budget.limit} steps exhausted")
        self.budget = budget


@dataclass
class Budget:
    """A step counter with a hard limit.

    Attributes:
        limit (int): Number of steps allowed.
        used (int): Steps consumed so far.
        parent (Budget, optional): Counter charged alongside this one.
    """

    limit: int
    used: int = 0
    parent: Budget | None = field(default=None, repr=False)

    @property
    def remaining(self) -> int:
        return max(self.limit - self.used, 0)

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit

    def tick(self, steps: int = 1) -> None:
        """Consume steps, raising `BudgetExhausted` when the limit is passed.

        The parent is charged first so that an enclosing exhaustion always wins.
        """
        if self.parent is not None:
            self.parent.tick(steps)

        self.used += steps

        if self.used > self.limit:
            raise BudgetExhausted(self)

    def child(self, limit: int) -> Budget:
        """Return a counter capped at `limit` that also charges this one."""
        return Budget(limit=limit, parent=self)

    def owns(self, exc: BudgetExhausted) -> bool:
        """Whether `exc` was raised by this counter."""
        return exc.budget is self


def as_budget(budget: Budget | int) -> Budget:
    """Wrap a plain step count into a fresh counter."""
    if isinstance(budget, Budget):
        return budget

    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")

    return Budget(limit=budget)
