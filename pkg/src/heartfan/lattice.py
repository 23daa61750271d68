"""Lattice vectors, dual vectors, the pairing and lattice homomorphisms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInputError, DimensionError
from .linalg import vgcd


@dataclass(frozen=True)
class Lattice:
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise DimensionError("lattice rank must be non-negative")

    def vector(self, coords: Iterable[int]) -> "LatticeVector":
        v = LatticeVector(coords)
        if len(v) != self.rank:
            raise DimensionError(f"expected {self.rank} coordinates, got {len(v)}")
        return v

    def zero(self) -> "LatticeVector":
        return LatticeVector((0,) * self.rank)


class LatticeVector(tuple):
    """Integer coordinate tuple; an element of the lattice."""

    def __new__(cls, coords: Iterable[int] = ()):
        vals = []
        for c in coords:
            if isinstance(c, bool) or not isinstance(c, int):
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = int(c)
                else:
                    raise TypeError(f"lattice coordinates must be integers, got {c!r}")
            vals.append(int(c))
        return super().__new__(cls, vals)

    def __add__(self, other):
        _same_rank(self, other)
        return LatticeVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _same_rank(self, other)
        return LatticeVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return LatticeVector(-a for a in self)

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(k * a for a in self)

    def __repr__(self) -> str:
        return "(" + ",".join(map(str, self)) + ")"


class DualVector(tuple):
    """Rational coordinate tuple; a rational point of the dual space."""

    def __new__(cls, coords: Iterable = ()):
        vals = []
        for c in coords:
            if isinstance(c, float):
                raise TypeError("floating point values are not accepted")
            vals.append(Fraction(c))
        return super().__new__(cls, vals)

    def __add__(self, other):
        _same_rank(self, other)
        return DualVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _same_rank(self, other)
        return DualVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return DualVector(-a for a in self)

    def scale(self, k) -> "DualVector":
        return DualVector(Fraction(k) * a for a in self)

    def __repr__(self) -> str:
        return "[" + ",".join(map(str, self)) + "]"


def _same_rank(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionError(f"rank mismatch: {len(a)} vs {len(b)}")


def pair(w: Sequence, x: Sequence) -> Fraction:
    """The pairing of a dual vector with a lattice vector, exactly."""
    _same_rank(w, x)
    return sum((Fraction(a) * b for a, b in zip(w, x)), Fraction(0))


def primitive(x: Sequence[int]) -> LatticeVector:
    """Divide by the gcd of the coordinates."""
    g = vgcd(x)
    if g == 0:
        raise DegenerateInputError("the zero vector has no primitive representative")
    return LatticeVector(int(a) // g for a in x)


@dataclass(frozen=True)
class LatticeHom:
    """An integer matrix of shape target-rank x source-rank."""

    matrix: tuple[tuple[int, ...], ...]
    source_rank: int

    def __post_init__(self) -> None:
        for row in self.matrix:
            if len(row) != self.source_rank:
                raise DimensionError("ragged homomorphism matrix")
            for a in row:
                if isinstance(a, bool) or not isinstance(a, int):
                    raise TypeError("homomorphism entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], source_rank: int | None = None) -> "LatticeHom":
        rows = tuple(tuple(int(a) for a in r) for r in rows)
        if source_rank is None:
            if not rows:
                raise DimensionError("source rank needed for a map to the zero lattice")
            source_rank = len(rows[0])
        return cls(rows, source_rank)

    @classmethod
    def identity(cls, n: int) -> "LatticeHom":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Sequence) -> tuple:
        if len(x) != self.source_rank:
            raise DimensionError(f"expected a rank-{self.source_rank} vector")
        vals = [sum((a * b for a, b in zip(row, x)), 0) for row in self.matrix]
        if all(isinstance(a, int) for a in x):
            return LatticeVector(vals)
        return DualVector(vals)

    def compose(self, other: "LatticeHom") -> "LatticeHom":
        """self after other."""
        if other.target_rank != self.source_rank:
            raise DimensionError("incompatible homomorphisms")
        cols = list(zip(*other.matrix)) if other.matrix else [()] * other.source_rank
        rows = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.matrix)
        return LatticeHom(rows, other.source_rank)


def dual_hom(f: LatticeHom) -> LatticeHom:
    """The transpose map between dual lattices."""
    rows = tuple(tuple(f.matrix[i][j] for i in range(f.target_rank)) for j in range(f.source_rank))
    return LatticeHom(rows, f.target_rank)
