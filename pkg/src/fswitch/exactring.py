"""Truncated graded commutative polynomial algebra over the rationals.

Every characteristic-class computation in the package happens inside a
:class:`RingPresentation`: a finite list of graded generators plus a
truncation degree ``D`` above which everything is zero.  Elements are
:class:`GradedClass` values with exact :class:`fractions.Fraction`
coefficients, stored sparsely as ``{exponent tuple: coefficient}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

__all__ = [
    "ExactRingError",
    "RingMismatchError",
    "NotAUnitError",
    "Generator",
    "RingPresentation",
    "GradedClass",
    "add",
    "mul",
    "invert_unit",
    "grade",
]


class ExactRingError(ValueError):
    pass


class RingMismatchError(ExactRingError):
    pass


class NotAUnitError(ExactRingError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if not self.name.isidentifier():
            raise ExactRingError(f"generator name {self.name!r} is not an identifier")
        if self.degree < 1:
            raise ExactRingError(f"generator {self.name} must have degree >= 1")


@dataclass(frozen=True)
class RingPresentation:
    """Generators and a truncation degree; immutable."""

    generators: tuple[Generator, ...]
    truncation: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.truncation < 0:
            raise ExactRingError("truncation must be non-negative")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ExactRingError(f"duplicate generator names in {names}")

    @classmethod
    def build(cls, truncation: int, **degrees: int) -> "RingPresentation":
        """``RingPresentation.build(4, x=1, c2=2)``; keyword order is kept."""
        return cls(tuple(Generator(n, d) for n, d in degrees.items()), truncation)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise ExactRingError(f"no generator named {name!r}")

    def monomial_degree(self, exps: tuple[int, ...]) -> int:
        return sum(e * g.degree for e, g in zip(exps, self.generators))

    def extend(self, *gens: Generator) -> "RingPresentation":
        return RingPresentation(self.generators + tuple(gens), self.truncation)

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def one(self) -> "GradedClass":
        return self.scalar(1)

    def scalar(self, c) -> "GradedClass":
        return GradedClass(self, {(0,) * len(self.generators): Fraction(c)})

    def gen(self, name: str) -> "GradedClass":
        i = self.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return GradedClass(self, {exps: Fraction(1)})

    def gens(self) -> tuple["GradedClass", ...]:
        return tuple(self.gen(n) for n in self.names)

    def __str__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"Q[{gens}]/(deg>{self.truncation})"


class GradedClass:
    """An element of a truncated graded ring.

    Zero coefficients and monomials above the truncation are never stored,
    so ``==`` is structural equality on the sparse term map.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingPresentation, terms: Mapping[tuple[int, ...], object]):
        clean = {}
        ngens = len(ring.generators)
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != ngens or any(e < 0 for e in exps):
                raise ExactRingError(f"bad exponent vector {exps} for {ring}")
            c = Fraction(c)
            if c and ring.monomial_degree(exps) <= ring.truncation:
                clean[exps] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self._terms.items())

    def _coerce(self, other) -> "GradedClass":
        if isinstance(other, GradedClass):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine classes from {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring.scalar(other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedClass._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        D = ring.truncation
        degs = [g.degree for g in ring.generators]
        # work over the integers after clearing denominators
        den1, left = _integral(self._terms)
        den2, right = _integral(other._terms)
        right = [(m, c, sum(e * d for e, d in zip(m, degs))) for m, c in right]
        acc: dict[tuple[int, ...], int] = {}
        for m1, c1 in left:
            d1 = sum(e * d for e, d in zip(m1, degs))
            for m2, c2, d2 in right:
                if d1 + d2 > D:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, 0) + c1 * c2
        den = den1 * den2
        out = {m: Fraction(c, den) for m, c in acc.items() if c}
        return GradedClass._raw(ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division of a graded class by zero")
            return self * (Fraction(1) / Fraction(other))
        return self * invert_unit(self._coerce(other))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = invert_unit(self), -k
        result = self.ring.one()
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, GradedClass):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == self.ring.scalar(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # structure

    def degree_of(self, exps: tuple[int, ...]) -> int:
        return self.ring.monomial_degree(exps)

    def constant(self) -> Fraction:
        return self._terms.get((0,) * len(self.ring.generators), Fraction(0))

    def grade(self, d: int) -> "GradedClass":
        return grade(self, d)

    def pieces(self) -> list["GradedClass"]:
        """Homogeneous components in degrees ``0..D``."""
        return [grade(self, d) for d in range(self.ring.truncation + 1)]

    def is_homogeneous(self, d: int) -> bool:
        return all(self.degree_of(m) == d for m in self._terms)

    def coefficient(self, exps: tuple[int, ...]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def substitute(self, target: RingPresentation, images: Mapping[str, "GradedClass"]) -> "GradedClass":
        """Ring map sending each generator to ``images[name]`` in ``target``.

        Generators missing from ``images`` must also exist in ``target`` and
        are sent to the generator of the same name.
        """
        imgs = []
        for g in self.ring.generators:
            img = images.get(g.name)
            if img is None:
                img = target.gen(g.name)
            elif not isinstance(img, GradedClass):
                img = target.scalar(img)
            if img.ring != target:
                raise RingMismatchError(f"image of {g.name} lives in the wrong ring")
            imgs.append(img)
        out = target.zero()
        for m, c in self._terms.items():
            term = target.scalar(c)
            for img, e in zip(imgs, m):
                if e:
                    term = term * img**e
            out = out + term
        return out

    def _sorted_items(self):
        return sorted(self._terms.items(), key=lambda mc: (self.degree_of(mc[0]), tuple(-e for e in mc[0])))

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.names
        parts = []
        for m, c in self._sorted_items():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"GradedClass({self})"


def _integral(terms: Mapping[tuple[int, ...], Fraction]) -> tuple[int, list[tuple[tuple[int, ...], int]]]:
    den = 1
    for c in terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return den, [(m, c.numerator * (den // c.denominator)) for m, c in terms.items()]


def _check_same(a: GradedClass, b: GradedClass):
    if a.ring != b.ring:
        raise RingMismatchError(f"cannot combine classes from {a.ring} and {b.ring}")


def add(a: GradedClass, b: GradedClass) -> GradedClass:
    _check_same(a, b)
    return a + b


def mul(a: GradedClass, b: GradedClass) -> GradedClass:
    _check_same(a, b)
    return a * b


def invert_unit(a: GradedClass) -> GradedClass:
    """Inverse of a class with constant term 1, via the geometric series."""
    if a.constant() != 1:
        raise NotAUnitError(f"constant term of {a} is {a.constant()}, expected 1")
    x = a - 1
    result = a.ring.one()
    power = a.ring.one()
    for _ in range(a.ring.truncation):
        power = power * (-x)
        if not power:
            break
        result = result + power
    return result


def grade(a: GradedClass, d: int) -> GradedClass:
    if not 0 <= d <= a.ring.truncation:
        raise ExactRingError(f"degree {d} outside 0..{a.ring.truncation}")
    return GradedClass._raw(a.ring, {m: c for m, c in a._terms.items() if a.degree_of(m) == d})


def total(pieces: Iterable[GradedClass]) -> GradedClass:
    pieces = list(pieces)
    if not pieces:
        raise ExactRingError("empty sum has no ring")
    out = pieces[0]
    for p in pieces[1:]:
        out = out + p
    return out
