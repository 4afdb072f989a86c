"""Deterministic operation counting.

Counts are machine independent, so the cost comparison between the two
neighbour-selection strategies can be asserted rather than timed.
"""

from __future__ import annotations

from collections import Counter


class OpCounter:
    """Named tallies of elementary operations."""

    NAMES = ("distance_pairs", "ks_comparisons", "neighbor_rankings", "eba_estimates")

    def __init__(self):
        self._counts: Counter[str] = Counter()

    def add(self, name: str, amount: int = 1) -> None:
        if name not in self.NAMES:
            raise KeyError(name)
        self._counts[name] += amount

    def __getitem__(self, name: str) -> int:
        return self._counts[name]

    @property
    def total(self) -> int:
        return sum(self._counts.values())

    def merge(self, other: "OpCounter") -> None:
        self._counts.update(other._counts)

    def as_dict(self) -> dict[str, int]:
        out = {name: self._counts[name] for name in self.NAMES}
        out["total"] = self.total
        return out

    def __repr__(self) -> str:
        return f"OpCounter({self.as_dict()})"


def tally(counter: OpCounter | None, name: str, amount: int = 1) -> None:
    if counter is not None:
        counter.add(name, amount)
