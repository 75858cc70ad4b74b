"""Virtual bundles: integer combinations of bundle symbols with line twists.

A :class:`BundleSymbol` carries its rank and, optionally, a Chern model:
either explicit Chern roots (degree-1 classes) or the Chern classes
``c_1..c_r`` themselves.  A :class:`KClass` is a finite formal sum
``sum mult * (symbol (x) twist)``; rank and total Chern class extend to it
additively and multiplicatively.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .exactring import (
    ExactRingError,
    Generator,
    GradedClass,
    RingMismatchError,
    RingPresentation,
    invert_unit,
)

__all__ = [
    "KClassError",
    "LineTag",
    "Twist",
    "BundleSymbol",
    "KClass",
    "rank",
    "total_chern",
    "total_segre",
    "sym_power",
    "dual",
    "tensor_line",
    "k_equal",
    "symmetric_to_elementary",
]


class KClassError(ValueError):
    pass


@dataclass(frozen=True)
class LineTag:
    """A named line bundle; ``c1`` may be left opaque (``None``)."""

    name: str
    c1: GradedClass | None = None


@dataclass(frozen=True)
class Twist:
    """Tensor product of line tags with integer exponents, kept sorted."""

    parts: tuple[tuple[LineTag, int], ...] = ()

    def __post_init__(self):
        acc: dict[LineTag, int] = {}
        for tag, e in self.parts:
            acc[tag] = acc.get(tag, 0) + e
        parts = tuple(sorted(((t, e) for t, e in acc.items() if e), key=lambda te: te[0].name))
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, tag: LineTag, power: int = 1) -> "Twist":
        return cls(((tag, power),))

    def __add__(self, other: "Twist") -> "Twist":
        return Twist(self.parts + other.parts)

    def __neg__(self) -> "Twist":
        return Twist(tuple((t, -e) for t, e in self.parts))

    def __bool__(self):
        return bool(self.parts)

    def has_class(self) -> bool:
        return all(t.c1 is not None for t, _ in self.parts)

    def c1(self, ring: RingPresentation) -> GradedClass:
        out = ring.zero()
        for tag, e in self.parts:
            if tag.c1 is None:
                raise KClassError(f"line {tag.name} has no Chern class")
            if tag.c1.ring != ring:
                raise RingMismatchError(f"line {tag.name} lives in another ring")
            out = out + e * tag.c1
        return out

    def __str__(self):
        bits = []
        for tag, e in self.parts:
            bits.append(tag.name if e == 1 else f"{tag.name}^{e}")
        return "(x)".join(bits)


@dataclass(frozen=True)
class BundleSymbol:
    name: str
    rank: int
    roots: tuple[GradedClass, ...] | None = None
    chern: tuple[GradedClass, ...] | None = field(default=None)

    def __post_init__(self):
        if self.rank < 0:
            raise KClassError(f"{self.name}: negative rank")
        if self.roots is not None and self.chern is not None:
            raise KClassError(f"{self.name}: give roots or Chern classes, not both")
        if self.roots is not None:
            object.__setattr__(self, "roots", tuple(self.roots))
            if len(self.roots) != self.rank:
                raise KClassError(f"{self.name}: {len(self.roots)} roots for rank {self.rank}")
            for r in self.roots:
                if not r.is_homogeneous(1):
                    raise KClassError(f"{self.name}: root {r} is not of degree 1")
        if self.chern is not None:
            object.__setattr__(self, "chern", tuple(self.chern))
            if len(self.chern) != self.rank:
                raise KClassError(f"{self.name}: need c_1..c_{self.rank}, got {len(self.chern)}")
            for i, c in enumerate(self.chern, 1):
                if not c.is_homogeneous(i):
                    raise KClassError(f"{self.name}: c_{i} = {c} is not homogeneous of degree {i}")

    # constructors

    @classmethod
    def line(cls, name: str, c1: GradedClass) -> "BundleSymbol":
        return cls(name, 1, roots=(c1,))

    @classmethod
    def split(cls, name: str, roots: Iterable[GradedClass]) -> "BundleSymbol":
        roots = tuple(roots)
        return cls(name, len(roots), roots=roots)

    @classmethod
    def formal(cls, name: str, ring: RingPresentation, prefix: str | None = None, rank: int | None = None) -> "BundleSymbol":
        """Symbol whose Chern classes are ring generators ``<prefix>1..<prefix>r``.

        The rank defaults to the number of consecutive such generators.
        """
        prefix = prefix or name
        if rank is None:
            rank = 0
            while f"{prefix}{rank + 1}" in ring.names:
                rank += 1
        return cls(name, rank, chern=tuple(ring.gen(f"{prefix}{i}") for i in range(1, rank + 1)))

    @classmethod
    def trivial(cls, rank: int, ring: RingPresentation, name: str = "O") -> "BundleSymbol":
        return cls(f"{name}^{rank}" if rank != 1 else name, rank, roots=(ring.zero(),) * rank)

    @classmethod
    def abstract(cls, name: str, rank: int) -> "BundleSymbol":
        """Rank-only symbol; Chern computations on it are errors."""
        return cls(name, rank)

    # queries

    @property
    def ring(self) -> RingPresentation | None:
        data = self.roots if self.roots is not None else self.chern
        return data[0].ring if data else None

    @property
    def has_chern_model(self) -> bool:
        return self.roots is not None or self.chern is not None or self.rank == 0

    def chern_classes(self, ring: RingPresentation) -> list[GradedClass]:
        """``[c_0, c_1, ..., c_rank]`` in ``ring`` (higher entries may be truncated to 0)."""
        if self.rank == 0:
            return [ring.one()]
        if self.roots is not None:
            total = ring.one()
            for r in self.roots:
                if r.ring != ring:
                    raise RingMismatchError(f"{self.name} lives in another ring")
                total = total * (1 + r)
            return [ring.one()] + [total.grade(i) if i <= ring.truncation else ring.zero() for i in range(1, self.rank + 1)]
        if self.chern is not None:
            if self.chern[0].ring != ring:
                raise RingMismatchError(f"{self.name} lives in another ring")
            return [ring.one()] + list(self.chern)
        raise KClassError(f"{self.name} has no Chern model")

    def total_chern(self, ring: RingPresentation, twist: Twist = Twist()) -> GradedClass:
        if not twist:
            total = ring.zero()
            for c in self.chern_classes(ring):
                total = total + c
            return total
        t = twist.c1(ring)
        if self.roots is not None:
            return BundleSymbol.split(self.name, (r + t for r in self.roots)).total_chern(ring)
        # c(E (x) t) = sum_i c_i(E) (1+t)^(r-i)
        cs = self.chern_classes(ring)
        total = ring.zero()
        for i, c in enumerate(cs):
            total = total + c * (1 + t) ** (self.rank - i)
        return total

    def dual(self) -> "BundleSymbol":
        name = self.name[:-1] if self.name.endswith("*") else self.name + "*"
        roots = None if self.roots is None else tuple(-r for r in self.roots)
        chern = None if self.chern is None else tuple((-1) ** i * c for i, c in enumerate(self.chern, 1))
        return replace(self, name=name, roots=roots, chern=chern)

    def is_trivial(self) -> bool:
        if self.roots is not None:
            return all(not r for r in self.roots)
        if self.chern is not None:
            return all(not c for c in self.chern)
        return self.rank == 0

    def __str__(self):
        return self.name


Term = tuple[BundleSymbol, Twist]


class KClass:
    """Formal integer combination of twisted bundle symbols."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Term, int] | Iterable[tuple[Term, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Term, int] = {}
        for (sym, tw), mult in items:
            acc[(sym, tw)] = acc.get((sym, tw), 0) + int(mult)
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def of(cls, symbol: BundleSymbol, mult: int = 1, twist: Twist = Twist()) -> "KClass":
        return cls({(symbol, twist): mult})

    @classmethod
    def sum(cls, parts: Iterable["KClass"]) -> "KClass":
        out = cls()
        for p in parts:
            out = out + p
        return out

    @property
    def terms(self) -> dict[Term, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __add__(self, other: "KClass") -> "KClass":
        if not isinstance(other, KClass):
            return NotImplemented
        return KClass(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "KClass":
        return KClass({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "KClass") -> "KClass":
        return self + (-other)

    def __rmul__(self, n: int) -> "KClass":
        if not isinstance(n, int):
            return NotImplemented
        return KClass({k: n * v for k, v in self._terms.items()})

    def __bool__(self):
        return bool(self._terms)

    def normal_form(self) -> tuple:
        return tuple(sorted(((s.name, str(t), s.rank, m) for (s, t), m in self._terms.items())))

    def __eq__(self, other):
        if not isinstance(other, KClass):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def rings(self) -> set[RingPresentation]:
        out = set()
        for (s, t), _ in self._terms.items():
            if s.ring is not None:
                out.add(s.ring)
            for tag, _e in t.parts:
                if tag.c1 is not None:
                    out.add(tag.c1.ring)
        return out

    def reduced(self) -> "KClass":
        """Drop untwisted trivial summands (quotient by trivial bundles)."""
        return KClass({k: v for k, v in self._terms.items() if not (k[0].is_trivial() and not k[1])})

    def expanded(self) -> Counter:
        """Multiset of line classes after splitting every root-modelled term.

        Terms without roots stay as ``(symbol, twist)`` atoms.
        """
        out: Counter = Counter()
        for (sym, tw), mult in self._terms.items():
            if sym.roots is not None:
                if tw and tw.has_class():
                    shift = tw.c1(sym.ring) if sym.ring is not None else None
                    for r in sym.roots:
                        out[("line", r + shift, Twist())] += mult
                else:
                    for r in sym.roots:
                        out[("line", r, tw)] += mult
            else:
                out[("atom", sym, tw)] += mult
        return Counter({k: v for k, v in out.items() if v})

    def __str__(self):
        if not self._terms:
            return "0"
        bits = []
        for (s, t), m in sorted(self._terms.items(), key=lambda kv: (kv[0][0].name, str(kv[0][1]))):
            body = s.name if not t else f"{s.name}(x){t}"
            if m == 1:
                bits.append(f"+ {body}")
            elif m == -1:
                bits.append(f"- {body}")
            else:
                bits.append(f"{'+' if m > 0 else '-'} {abs(m)}{body}")
        text = " ".join(bits)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"KClass({self})"


def rank(k: KClass) -> int:
    return sum(m * s.rank for (s, _t), m in k.items())


def _ring_of(k: KClass, ring: RingPresentation | None) -> RingPresentation:
    rings = k.rings()
    if ring is not None:
        rings.add(ring)
    if len(rings) > 1:
        raise RingMismatchError("K-class mixes symbols from different rings")
    if not rings:
        raise KClassError("cannot infer a ring for this K-class; pass ring=")
    return rings.pop()


def total_chern(k: KClass, ring: RingPresentation | None = None) -> GradedClass:
    ring = _ring_of(k, ring) if (k or ring is None) else ring
    pos, neg = ring.one(), ring.one()
    for (sym, tw), mult in k.items():
        c = sym.total_chern(ring, tw) ** abs(mult)
        if mult > 0:
            pos = pos * c
        else:
            neg = neg * c
    return pos if neg == 1 else pos * invert_unit(neg)


def total_segre(k: KClass, ring: RingPresentation | None = None) -> GradedClass:
    return total_chern(-k, ring)


def symmetric_to_elementary(p: GradedClass, r1: str, r2: str, e1: GradedClass, e2: GradedClass) -> GradedClass:
    """Rewrite a polynomial symmetric in generators ``r1, r2`` through ``e1 = r1+r2``, ``e2 = r1*r2``.

    ``p`` must involve no other generators; the result lives in the ring of
    ``e1``/``e2``.
    """
    ring = p.ring
    i1, i2 = ring.index(r1), ring.index(r2)
    for m, _c in p.items():
        if any(e for j, e in enumerate(m) if j not in (i1, i2)):
            raise KClassError("polynomial involves generators other than the roots")
    s1 = ring.gen(r1) + ring.gen(r2)
    s2 = ring.gen(r1) * ring.gen(r2)
    target = e1.ring
    out = target.zero()
    rest = p
    while rest:
        # lex-leading monomial r1^a r2^b; a >= b for symmetric input
        lead = max(rest.items(), key=lambda mc: (mc[0][i1], mc[0][i2]))
        (m, c) = lead
        a, b = m[i1], m[i2]
        if a < b:
            raise KClassError(f"{p} is not symmetric in {r1}, {r2}")
        out = out + c * e1 ** (a - b) * e2**b
        rest = rest - c * s1 ** (a - b) * s2**b
    return out


def sym_power(u: BundleSymbol, d: int) -> KClass:
    """``S^d`` of a rank-2 symbol: roots ``i*u1 + (d-i)*u2``.

    For a symbol with formal Chern classes the roots are adjoined in an
    auxiliary ring and the result is rewritten through ``c1, c2``.
    """
    if u.rank != 2:
        raise KClassError(f"sym_power needs a rank-2 bundle, {u.name} has rank {u.rank}")
    if d < 0:
        raise KClassError("symmetric power exponent must be non-negative")
    name = f"S^{d}({u.name})"
    if d == 0 and u.ring is not None:
        return KClass.of(BundleSymbol.trivial(1, u.ring))
    if u.roots is not None:
        u1, u2 = u.roots
        return KClass.of(BundleSymbol.split(name, (i * u1 + (d - i) * u2 for i in range(d + 1))))
    if u.chern is None:
        raise KClassError(f"{u.name} has no Chern model")
    base = u.chern[0].ring
    a, b = "r1", "r2"
    aux = RingPresentation((Generator(a, 1), Generator(b, 1)), base.truncation)
    x, y = aux.gen(a), aux.gen(b)
    total = aux.one()
    for i in range(d + 1):
        total = total * (1 + i * x + (d - i) * y)
    c = symmetric_to_elementary(total, a, b, u.chern[0], u.chern[1])
    classes = tuple(c.grade(i) if i <= base.truncation else base.zero() for i in range(1, d + 2))
    return KClass.of(BundleSymbol(name, d + 1, chern=classes))


def dual(k: KClass) -> KClass:
    return KClass({(s.dual(), -t): m for (s, t), m in k.items()})


def tensor_line(k: KClass, t: LineTag | Twist) -> KClass:
    tw = Twist.of(t) if isinstance(t, LineTag) else t
    return KClass({(s, old + tw): m for (s, old), m in k.items()})


def k_equal(k1: KClass, k2: KClass, reduced: bool = False) -> bool:
    """Equality in K after expanding split symbols into their line summands."""
    if reduced:
        k1, k2 = k1.reduced(), k2.reduced()
    if k1 == k2:
        return True
    try:
        return k1.expanded() == k2.expanded()
    except (KClassError, ExactRingError):
        return False
