from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FeatureSubset"]


@dataclass(frozen=True)
class FeatureSubset:
    """Ordered set of distinct feature indices out of ``n`` features.

    Order is the order in which features were drawn; equality and the binary
    vector ignore nothing, so two subsets with the same members in a
    different order compare unequal but share ``binary_vector()``.
    """

    indices: tuple
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not idx:
            raise ValueError("empty feature subset")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate feature index in {idx}")
        bad = [i for i in idx if not 0 <= i < self.n]
        if bad:
            raise ValueError(f"feature index out of range [0, {self.n}): {bad}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, item) -> bool:
        return item in self.indices

    @property
    def size(self) -> int:
        return len(self.indices)

    def binary_vector(self) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.int8)
        v[list(self.indices)] = 1
        return v

    @classmethod
    def from_binary(cls, vector) -> "FeatureSubset":
        v = np.asarray(vector)
        return cls(tuple(np.flatnonzero(v).tolist()), v.size)

    def sorted(self) -> "FeatureSubset":
        return FeatureSubset(tuple(sorted(self.indices)), self.n)
