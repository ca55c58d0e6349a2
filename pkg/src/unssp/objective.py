"""Universal objective values over sorted arc-cost vectors, and the near-shortest bound."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import LambdaError, ValidationError
from .graph import INT64_MAX, Graph, Path

SUM = "sum"
BOTTLENECK = "bottleneck"
KSUM = "ksum"
KMAX = "kmax"
EXPLICIT = "vec"

FAMILIES = (SUM, BOTTLENECK, KSUM, KMAX, EXPLICIT)


@dataclass(frozen=True)
class Lambda:
    """A universal weight vector stored by family.

    ``Sum``, ``Bottleneck``, ``KSum(k)`` and ``KMax(k)`` never materialise their
    length-(n-1) vector; ``Explicit`` keeps its weights.
    """

    family: str
    k: int | None = None
    weights: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise LambdaError(f"unknown weight family {self.family!r}")
        if self.family in (KSUM, KMAX):
            if self.k is None or self.k < 1:
                raise LambdaError(f"{self.family} needs k >= 1")
        if self.family == EXPLICIT and self.weights is None:
            raise LambdaError("explicit weight vector needs weights")

    @classmethod
    def sum(cls) -> Lambda:
        return cls(SUM)

    @classmethod
    def bottleneck(cls) -> Lambda:
        return cls(BOTTLENECK)

    @classmethod
    def ksum(cls, k: int) -> Lambda:
        return cls(KSUM, k=k)

    @classmethod
    def kmax(cls, k: int) -> Lambda:
        return cls(KMAX, k=k)

    @classmethod
    def explicit(cls, weights: Sequence[int]) -> Lambda:
        return cls(EXPLICIT, weights=tuple(int(w) for w in weights))

    def check(self, n: int) -> None:
        """Raise :class:`LambdaError` unless the vector fits a graph with ``n`` vertices."""
        if self.family in (KSUM, KMAX):
            assert self.k is not None
            if not 1 <= self.k <= max(n - 1, 1):
                raise LambdaError(f"k={self.k} outside 1..{n - 1}")
        elif self.family == EXPLICIT:
            assert self.weights is not None
            if len(self.weights) != n - 1:
                raise LambdaError(f"weight vector has length {len(self.weights)}, expected {n - 1}")

    @property
    def nonnegative(self) -> bool:
        if self.family == EXPLICIT:
            assert self.weights is not None
            return all(w >= 0 for w in self.weights)
        return True

    def vector(self, n: int) -> tuple[int, ...]:
        """The dense length-(n-1) vector this family stands for."""
        size = n - 1
        if self.family == SUM:
            return (1,) * size
        if self.family == BOTTLENECK:
            return (1,) + (0,) * (size - 1)
        if self.family == KSUM:
            assert self.k is not None
            return (1,) * self.k + (0,) * (size - self.k)
        if self.family == KMAX:
            assert self.k is not None
            return (0,) * (self.k - 1) + (1,) + (0,) * (size - self.k)
        assert self.weights is not None
        return self.weights

    def __str__(self) -> str:
        if self.family in (KSUM, KMAX):
            return f"{self.family}:{self.k}"
        if self.family == EXPLICIT:
            assert self.weights is not None
            return "vec:" + ",".join(map(str, self.weights))
        return self.family


def parse_lambda(spec: str, n: int) -> Lambda:
    """Parse ``sum``, ``bottleneck``, ``ksum:<k>``, ``kmax:<k>`` or ``vec:<w1,...>``."""
    spec = spec.strip()
    family, _, arg = spec.partition(":")
    family = family.lower()
    if family in (SUM, BOTTLENECK):
        if arg:
            raise LambdaError(f"{family} takes no argument")
        lam = Lambda(family)
    elif family in (KSUM, KMAX):
        try:
            k = int(arg)
        except ValueError:
            raise LambdaError(f"{family} needs an integer k, got {arg!r}") from None
        lam = Lambda(family, k=k)
    elif family == EXPLICIT:
        try:
            weights = [int(w) for w in arg.split(",")] if arg else []
        except ValueError:
            raise LambdaError(f"bad weight list {arg!r}") from None
        lam = Lambda.explicit(weights)
    else:
        raise LambdaError(f"unknown weight family {family!r}")
    lam.check(n)
    return lam


def sorted_cost_vector(p: Path, g: Graph) -> tuple[int, ...]:
    """Arc costs of ``p`` in nonincreasing order, zero-padded to length n-1."""
    costs = sorted(p.costs(g), reverse=True)
    return tuple(costs) + (0,) * (g.n - 1 - len(costs))


def _checked(value: int) -> int:
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise OverflowError("universal objective value exceeds the 64-bit range")
    return value


def value_of_costs(costs: Sequence[int], lam: Lambda) -> int:
    """Objective value for an arbitrary multiset of arc costs."""
    family = lam.family
    if family == SUM:
        return _checked(sum(costs))
    if family == BOTTLENECK:
        return max(costs, default=0)
    if family == KSUM:
        assert lam.k is not None
        return _checked(sum(heapq.nlargest(lam.k, costs)))
    if family == KMAX:
        assert lam.k is not None
        if len(costs) < lam.k:
            return 0
        return heapq.nlargest(lam.k, costs)[-1]
    assert lam.weights is not None
    ordered = sorted(costs, reverse=True)
    return _checked(sum(w * c for w, c in zip(lam.weights, ordered)))


def universal_value(p: Path, lam: Lambda, g: Graph) -> int:
    return value_of_costs(p.costs(g), lam)


def _as_fraction(eps: Fraction | int | str) -> Fraction:
    eps = Fraction(eps)
    if eps < 0:
        raise ValidationError(f"epsilon must be nonnegative, got {eps}")
    return eps


@dataclass(frozen=True)
class Bound:
    """The exact bound ``(1 + eps) * f_star`` with rational ``eps``."""

    f_star: int
    eps: Fraction

    def __init__(self, f_star: int, eps: Fraction | int | str) -> None:
        object.__setattr__(self, "f_star", f_star)
        object.__setattr__(self, "eps", _as_fraction(eps))

    @property
    def value(self) -> Fraction:
        return (1 + self.eps) * self.f_star

    @property
    def floor(self) -> int:
        num, den = self.eps.numerator, self.eps.denominator
        return ((den + num) * self.f_star) // den

    def admits(self, value: int, strict: bool = False) -> bool:
        num, den = self.eps.numerator, self.eps.denominator
        lhs = value * den
        rhs = (den + num) * self.f_star
        return lhs < rhs if strict else lhs <= rhs


def within_bound(value: int, b: Bound) -> bool:
    return b.admits(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den`` or an integer into a nonnegative :class:`Fraction`."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"expected a rational 'num/den' or an integer, got {text!r}") from None
    if value < 0:
        raise ValidationError(f"expected a nonnegative rational, got {text!r}")
    return value
