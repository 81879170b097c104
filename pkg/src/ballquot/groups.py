"""Permutations on {0, ..., n-1} usable with the generic closure in ``torus``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError


@dataclass(frozen=True)
class Perm:
    images: tuple

    def __post_init__(self):
        img = tuple(int(x) for x in self.images)
        if sorted(img) != list(range(len(img))):
            raise InputError(f"not a permutation: {img}")
        object.__setattr__(self, "images", img)

    @property
    def dim(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> "Perm":
        img = list(range(n))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                img[x] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(img))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __matmul__(self, other: "Perm") -> "Perm":
        """(self @ other)(x) = self(other(x))."""
        return Perm(tuple(self.images[other.images[x]] for x in range(self.dim)))

    def inverse(self) -> "Perm":
        inv = [0] * self.dim
        for x, y in enumerate(self.images):
            inv[y] = x
        return Perm(tuple(inv))

    def cycles(self, one_based: bool = False) -> list:
        seen, out = set(), []
        for x in range(self.dim):
            if x in seen:
                continue
            cyc, y = [], x
            while y not in seen:
                seen.add(y)
                cyc.append(y + one_based)
                y = self.images[y]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> list:
        return sorted((len(c) for c in self.cycles()), reverse=True)

    def __str__(self) -> str:
        cyc = [c for c in self.cycles(one_based=True) if len(c) > 1]
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
