"""Finite unions of closed intervals: target sets for all probability estimates.

Intervals are normalized at construction (sorted, overlapping/touching pieces
merged).  Enlarging by eps/2 and measuring distances to the set are the two
operations every smoothing and majorant construction needs.  Neighborhoods use
closed endpoints; the open/closed distinction only moves sets by boundary
points of Lebesgue measure zero, which none of the absolutely continuous
smoothing measures can see.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["IntervalUnionSet"]


@dataclass(frozen=True)
class IntervalUnionSet:
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        merged = []
        for a, b in sorted(self.intervals):
            if not (math.isfinite(a) and math.isfinite(b)) or b < a:
                raise ValueError(f"bad interval [{a}, {b}]")
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalUnionSet":
        return cls(tuple((float(a), float(b)) for a, b in pairs))

    @classmethod
    def from_text(cls, text: str) -> "IntervalUnionSet":
        """Parse the wire form ``a1,b1;a2,b2;...`` (empty string = empty set)."""
        text = text.strip()
        if not text:
            return cls(())
        pairs = []
        for chunk in text.split(";"):
            a, b = chunk.split(",")
            pairs.append((float(a), float(b)))
        return cls.from_pairs(pairs)

    def to_text(self) -> str:
        return ";".join(f"{a:g},{b:g}" for a, b in self.intervals)

    @property
    def is_empty(self) -> bool:
        return len(self.intervals) == 0

    @property
    def bounds(self) -> tuple[float, float]:
        if self.is_empty:
            return (0.0, 0.0)
        return self.intervals[0][0], self.intervals[-1][1]

    def enlarge(self, eps: float) -> "IntervalUnionSet":
        """Closed eps-neighborhood (overlaps re-merged)."""
        if eps < 0:
            raise ValueError("enlargement must be nonnegative")
        return IntervalUnionSet(tuple((a - eps, b + eps) for a, b in self.intervals))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            out |= (x >= a) & (x <= b)
        return out

    def distance_to(self, x):
        """Pointwise distance to the set (+inf for the empty set)."""
        x = np.asarray(x, dtype=float)
        if self.is_empty:
            return np.full(x.shape, np.inf)
        d = np.full(x.shape, np.inf)
        for a, b in self.intervals:
            d = np.minimum(d, np.maximum.reduce([a - x, x - b, np.zeros_like(x)]))
        return d

    def subset_of(self, other: "IntervalUnionSet") -> bool:
        return all(
            any(oa <= a and b <= ob for oa, ob in other.intervals)
            for a, b in self.intervals
        )
