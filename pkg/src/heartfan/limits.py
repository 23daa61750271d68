"""Exact limit directions of rank-2 families, including quadratic irrationals.

A `Surd` is a + b*sqrt(d) with rational a, b and a non-square integer d >= 2 (or b = 0).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

from .cones import RatCone


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Surd:
    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.b and (self.d < 2 or isqrt(self.d) ** 2 == self.d):
            raise ValueError("surd radicand must be a positive non-square")

    @property
    def rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        """Sign of a + b sqrt(d), decided by comparing a^2 with b^2 d."""
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def affine(self, p, q) -> "Surd":
        """p + q * self."""
        return Surd(Fraction(p) + Fraction(q) * self.a, Fraction(q) * self.b, self.d)

    def __str__(self) -> str:
        if self.rational:
            return str(self.a)
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt({self.d})"


@dataclass(frozen=True)
class LimitRay:
    """Direction [-1, slope] in the dual plane."""

    slope: Surd

    @property
    def rational(self) -> bool:
        return self.slope.rational

    def pair_sign(self, h: Sequence) -> int:
        """Sign of h . [-1, slope]."""
        return self.slope.affine(-Fraction(h[0]), h[1]).sign()

    def to_json(self) -> dict:
        s = self.slope
        return {
            "direction": ["-1", str(s)],
            "rational": s.rational,
            "slope": {"a": str(s.a), "b": str(s.b), "d": s.d},
        }


@dataclass(frozen=True)
class LimitRegion:
    """The closed cone between two limit rays (equal for a single rational ray), for Kronecker(n)."""

    n: int

    @property
    def rays(self) -> tuple[LimitRay, ...]:
        n = self.n
        if n == 2:
            return (LimitRay(Surd(1)),)
        h = Fraction(1, 2)
        return (LimitRay(Surd(Fraction(n, 2), -h, n * n - 4)), LimitRay(Surd(Fraction(n, 2), h, n * n - 4)))

    @property
    def algebraic_data(self) -> tuple[int, int]:
        return (self.n, self.n * self.n - 4)

    def contains(self, v: Sequence) -> bool:
        x, y = Fraction(v[0]), Fraction(v[1])
        if x >= 0:
            return False
        if self.n == 2:
            return x + y == 0
        return y * y + self.n * x * y + x * x <= 0

    def ray_in_cone(self, ray: LimitRay, cone: RatCone) -> bool:
        if any(ray.pair_sign(h) < 0 for h in cone.halfspaces):
            return False
        return all(ray.pair_sign(e) == 0 for e in cone.equations)

    def meets(self, cone: RatCone) -> bool:
        """True when the cone and the region share a non-zero point."""
        if cone.rank != 2:
            return False
        if any(self.contains(g) for g in cone.generators()):
            return True
        return any(self.ray_in_cone(r, cone) for r in self.rays)

    def to_json(self) -> dict:
        return {
            "family": "kronecker",
            "n": self.n,
            "discriminant": self.n * self.n - 4,
            "rays": [r.to_json() for r in self.rays],
        }


def region_for(metadata: Mapping) -> LimitRegion | None:
    fam = metadata.get("family") if metadata else None
    if isinstance(fam, Mapping) and fam.get("kind") == "kronecker":
        return LimitRegion(int(fam["n"]))
    return None
