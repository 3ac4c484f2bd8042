"""Finitely supported graded vector spaces over Q and degree-shifting maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import ContractError
from .ratlinalg import RatMatrix, Q


class GradedSpace:
    """dims: degree -> dimension; degrees outside the support have dimension 0."""

    __slots__ = ("dims",)

    def __init__(self, dims: Mapping[int, int] | None = None):
        clean = {}
        for k, v in (dims or {}).items():
            k, v = int(k), int(v)
            if v < 0:
                raise ContractError(f"negative dimension {v} in degree {k}")
            if v:
                clean[k] = v
        self.dims = dict(sorted(clean.items()))

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def span(self) -> tuple[int, int] | None:
        if not self.dims:
            return None
        return min(self.dims), max(self.dims)

    def shifted(self, s: int) -> "GradedSpace":
        """The space W with W^i = self^{i - s}."""
        return GradedSpace({i + s: d for i, d in self.dims.items()})

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __hash__(self):
        return hash(tuple(self.dims.items()))

    def __repr__(self):
        return f"GradedSpace({self.dims})"


@dataclass(frozen=True)
class GradedMap:
    """A family of blocks V^i -> W^{i+shift}; missing blocks are zero."""

    source: GradedSpace
    target: GradedSpace
    shift: int
    blocks: Mapping[int, RatMatrix] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, m in self.blocks.items():
            i = int(i)
            if not isinstance(m, RatMatrix):
                m = RatMatrix(m, self.source.dim(i)) if m else RatMatrix.zeros(
                    self.target.dim(i + self.shift), self.source.dim(i))
            want = (self.target.dim(i + self.shift), self.source.dim(i))
            if m.shape != want:
                raise ContractError(
                    f"block at degree {i} has shape {m.shape}, expected {want}")
            if want[0] and want[1] and not m.is_zero():
                clean[i] = m
        object.__setattr__(self, "blocks", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, source, target, shift=0) -> "GradedMap":
        return cls(source, target, shift, {})

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedMap":
        return cls(space, space, 0, {i: RatMatrix.identity(d) for i, d in space.dims.items()})

    def block(self, i: int) -> RatMatrix:
        m = self.blocks.get(i)
        if m is None:
            return RatMatrix.zeros(self.target.dim(i + self.shift), self.source.dim(i))
        return m

    def apply(self, i: int, v):
        return self.block(i) @ v

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition self o other."""
        if other.target != self.source:
            raise ContractError("composition: target/source mismatch")
        blocks = {}
        for i in other.source.degrees:
            blocks[i] = self.block(i + other.shift) @ other.block(i)
        return GradedMap(other.source, self.target, self.shift + other.shift, blocks)

    def _combine(self, other, op):
        if (self.source, self.target, self.shift) != (other.source, other.target, other.shift):
            raise ContractError("incompatible graded maps")
        return GradedMap(self.source, self.target, self.shift,
                         {i: op(self.block(i), other.block(i)) for i in self.source.degrees})

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def scaled(self, s) -> "GradedMap":
        s = Q(s)
        return GradedMap(self.source, self.target, self.shift,
                         {i: m * s for i, m in self.blocks.items()})

    def power(self, k: int) -> "GradedMap":
        if self.source != self.target:
            raise ContractError("power of a map between different spaces")
        out = GradedMap.identity(self.source)
        for _ in range(k):
            out = self @ out
        return out

    def power_block(self, i: int, k: int) -> RatMatrix:
        """Matrix of self^k restricted to degree i (endomorphisms only)."""
        m = RatMatrix.identity(self.source.dim(i))
        d = i
        for _ in range(k):
            m = self.block(d) @ m
            d += self.shift
        return m

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.shift == other.shift and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.source, self.target, self.shift, tuple(self.blocks.items())))
