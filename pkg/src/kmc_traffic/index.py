"""Binary-indexed (Fenwick) prefix sums over non-negative rates."""

from typing import List, Sequence, Union

import numpy as np


class FenwickIndex:
    """Cumulative rate table over keys 0..n-1.

    Supports O(log n) point updates and prefix search, plus an O(n) bulk
    rebuild for steps that change most of the rates at once. find() returns
    the smallest key whose cumulative sum reaches the target, which is the
    selection rule  sum_{j<k} r_j < u <= sum_{j<=k} r_j.
    """

    def __init__(self, size: int):
        assert size >= 0
        self.size = size
        self._tree: List[float] = [0.0] * (size + 1)
        self._values: List[float] = [0.0] * size
        top = 1
        while top * 2 <= size:
            top *= 2
        self._top = top if size else 0

    @classmethod
    def from_values(cls, values: Union[Sequence[float], np.ndarray]) -> "FenwickIndex":
        """Build an index holding the given values."""
        index = cls(len(values))
        index.rebuild(values)
        return index

    def rebuild(self, values: Union[Sequence[float], np.ndarray]) -> None:
        """Replace every value at once in O(n)."""
        values = np.asarray(values, dtype=float)
        assert values.size == self.size
        prefix = np.concatenate(([0.0], np.cumsum(values)))
        i = np.arange(1, self.size + 1)
        tree = np.empty(self.size + 1)
        tree[0] = 0.0
        tree[1:] = prefix[i] - prefix[i - (i & -i)]
        self._tree = tree.tolist()
        self._values = values.tolist()

    def update(self, key: int, value: float) -> None:
        """Set the value stored at a key."""
        delta = value - self._values[key]
        if delta == 0.0:
            return
        self._values[key] = value
        tree = self._tree
        j = key + 1
        while j <= self.size:
            tree[j] += delta
            j += j & -j

    def value(self, key: int) -> float:
        """Value stored at a key."""
        return self._values[key]

    def prefix(self, count: int) -> float:
        """Sum of the first count values (keys 0..count-1)."""
        tree = self._tree
        j = count
        total = 0.0
        while j > 0:
            total += tree[j]
            j -= j & -j
        return total

    @property
    def total(self) -> float:
        """Sum of all values."""
        return self.prefix(self.size)

    def find(self, target: float) -> int:
        """Smallest key k with prefix(k + 1) >= target.

        Targets at or below zero resolve to the first key with a positive value;
        targets above the total resolve to the last key with a positive value.
        """
        if target <= 0.0:
            target = np.nextafter(0.0, 1.0)
        tree = self._tree
        j = 0
        remaining = target
        half = self._top
        while half > 0:
            k = j + half
            if k <= self.size and remaining > tree[k]:
                j = k
                remaining -= tree[k]
            half >>= 1
        if j >= self.size:
            j = self.size - 1
            while j > 0 and self._values[j] <= 0.0:
                j -= 1
        return j

    def values(self) -> np.ndarray:
        """Copy of the stored values."""
        return np.array(self._values, dtype=float)

    def __len__(self) -> int:
        return self.size
