"""Admissible graphs, type I exceptional classes and their partial orders.

An admissible graph on ``n`` blowups is a labelled forest in which every
parent label is smaller than its children's.  Vertex ``i`` carries the
class ``e_i = E_i - sum of E_j over the direct descendants j``.  Classes
are vectors over ``E_1..E_n`` plus a multiple of the curve class ``C``,
with ``E_i.E_j = -delta_ij`` and ``C.E_i = 0``.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "GraphError",
    "AdmissibleGraph",
    "ExcClass",
    "PairingContext",
    "e_class",
    "curve_class",
    "pair",
    "codim",
    "special_condition",
    "negative_set",
    "effective_coeffs",
    "partial_gt",
    "partial_sqsupset",
    "partial_gg",
    "Intermediate",
    "find_intermediate",
    "enumerate_admissible",
    "iter_gt_pairs",
    "MAX_ENUMERATE",
]

MAX_ENUMERATE = 7


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class AdmissibleGraph:
    n: int
    parents: tuple[int | None, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("need at least one vertex")
        parents = tuple(self.parents)
        object.__setattr__(self, "parents", parents)
        if len(parents) != self.n:
            raise GraphError(f"expected {self.n} parent entries, got {len(parents)}")
        for child, par in enumerate(parents, 1):
            if par is not None and not 1 <= par < child:
                raise GraphError(f"edge {par}->{child} violates parent < child")

    @classmethod
    def isolated(cls, n: int) -> "AdmissibleGraph":
        return cls(n, (None,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "AdmissibleGraph":
        parents: list[int | None] = [None] * n
        for par, child in edges:
            if not 1 <= child <= n:
                raise GraphError(f"vertex {child} outside 1..{n}")
            if parents[child - 1] is not None:
                raise GraphError(f"vertex {child} has two parents")
            parents[child - 1] = par
        return cls(n, tuple(parents))

    @classmethod
    def from_children(cls, n: int, children: Mapping[int, Iterable[int]]) -> "AdmissibleGraph":
        return cls.from_edges(n, ((p, c) for p, cs in children.items() for c in cs))

    @classmethod
    def from_json(cls, text: str | dict) -> "AdmissibleGraph":
        data = json.loads(text) if isinstance(text, str) else text
        return cls.from_edges(int(data["n"]), data.get("edges", []))

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for c, p in enumerate(self.parents, 1) if p is not None]

    def children(self, i: int) -> tuple[int, ...]:
        return tuple(c for c, p in enumerate(self.parents, 1) if p == i)

    def parent(self, i: int) -> int | None:
        return self.parents[i - 1]

    def detach(self, vertices: Iterable[int]) -> "AdmissibleGraph":
        """Copy with every child of the given vertices made a root."""
        vs = set(vertices)
        return AdmissibleGraph(self.n, tuple(None if p in vs else p for p in self.parents))

    def __str__(self):
        return "{" + ", ".join(f"{p}->{c}" for p, c in self.edges) + "}" if self.edges else "{}"


@dataclass(frozen=True)
class ExcClass:
    coeffs: tuple[int, ...]
    c_coeff: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))

    @classmethod
    def zero(cls, n: int) -> "ExcClass":
        return cls((0,) * n)

    @classmethod
    def E(cls, n: int, i: int) -> "ExcClass":
        return cls(tuple(1 if j == i else 0 for j in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "ExcClass"):
        if self.n != other.n:
            raise GraphError(f"classes over {self.n} and {other.n} blowups")

    def __add__(self, other: "ExcClass") -> "ExcClass":
        self._check(other)
        return ExcClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.c_coeff + other.c_coeff)

    def __neg__(self) -> "ExcClass":
        return ExcClass(tuple(-a for a in self.coeffs), -self.c_coeff)

    def __sub__(self, other: "ExcClass") -> "ExcClass":
        return self + (-other)

    def __rmul__(self, k: int) -> "ExcClass":
        return ExcClass(tuple(k * a for a in self.coeffs), k * self.c_coeff)

    def __str__(self):
        bits = [f"{self.c_coeff}C"] if self.c_coeff else []
        bits += [f"{a:+d}E{i}" for i, a in enumerate(self.coeffs, 1) if a]
        return " ".join(bits) or "0"


@dataclass(frozen=True)
class PairingContext:
    m: tuple[int, ...]
    c_selfint: int = 0
    c_kpair: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        if any(x < 1 for x in self.m):
            raise GraphError(f"multiplicities must be >= 1, got {self.m}")


def _check_index(g: AdmissibleGraph, i: int):
    if not 1 <= i <= g.n:
        raise GraphError(f"vertex {i} outside 1..{g.n}")


@functools.lru_cache(maxsize=1 << 16)
def e_class(g: AdmissibleGraph, i: int) -> ExcClass:
    _check_index(g, i)
    coeffs = [0] * g.n
    coeffs[i - 1] = 1
    for c in g.children(i):
        coeffs[c - 1] -= 1
    return ExcClass(tuple(coeffs))


def curve_class(ctx: PairingContext) -> ExcClass:
    """``C - sum m_i E_i``."""
    return ExcClass(tuple(-x for x in ctx.m), 1)


def pair(x: ExcClass, y: ExcClass, ctx: PairingContext | None = None) -> int:
    x._check(y)
    selfint = ctx.c_selfint if ctx is not None else 0
    return x.c_coeff * y.c_coeff * selfint - sum(a * b for a, b in zip(x.coeffs, y.coeffs))


def codim(g: AdmissibleGraph) -> int:
    """Number of edges, cross-checked against ``-sum (e_i^2 - e_i.K)/2`` with ``K = sum E_l``."""
    edges = len(g.edges)
    K = ExcClass((1,) * g.n)
    twice = 0
    for i in range(1, g.n + 1):
        e = e_class(g, i)
        twice += pair(e, e) - pair(e, K)
    if twice % 2 or -twice // 2 != edges:
        raise GraphError(f"codim cross-check failed for {g}: edges={edges}, adjunction gives {-twice / 2}")
    return edges


@functools.lru_cache(maxsize=1 << 16)
def negative_set(g: AdmissibleGraph, ctx: PairingContext) -> frozenset[int]:
    if len(ctx.m) != g.n:
        raise GraphError(f"{len(ctx.m)} multiplicities for {g.n} vertices")
    cc = curve_class(ctx)
    return frozenset(i for i in range(1, g.n + 1) if pair(cc, e_class(g, i), ctx) < 0)


@functools.lru_cache(maxsize=1 << 16)
def special_condition(g: AdmissibleGraph, ctx: PairingContext) -> bool:
    cc = curve_class(ctx)
    for i in range(1, g.n + 1):
        e = e_class(g, i)
        if not (pair(cc, e, ctx) < 0 or pair(e, e) == -1):
            return False
    return True


def effective_coeffs(x: ExcClass, g: AdmissibleGraph) -> tuple[int, ...] | None:
    """Coefficients of ``x`` in the basis ``e_1..e_n`` of ``g``, if all are non-negative.

    The change of basis is unitriangular: ``c_j = x_j + c_parent(j)``.
    """
    if x.c_coeff:
        raise GraphError("effective_coeffs takes a pure exceptional class")
    if x.n != g.n:
        raise GraphError(f"class over {x.n} blowups, graph on {g.n}")
    c = [0] * g.n
    for j in range(1, g.n + 1):  # parents precede children
        par = g.parent(j)
        c[j - 1] = x.coeffs[j - 1] + (c[par - 1] if par is not None else 0)
    if any(v < 0 for v in c):
        return None
    return tuple(c)


def _sum_e(g: AdmissibleGraph, idx: Iterable[int]) -> ExcClass:
    out = ExcClass.zero(g.n)
    for i in idx:
        out = out + e_class(g, i)
    return out


@functools.lru_cache(maxsize=1 << 16)
def partial_gt(g: AdmissibleGraph, g2: AdmissibleGraph) -> bool:
    if g.n != g2.n:
        raise GraphError("graphs on different vertex counts")
    if g == g2:
        return False
    return all(effective_coeffs(e_class(g, i), g2) is not None for i in range(1, g.n + 1))


def partial_sqsupset(g: AdmissibleGraph, g2: AdmissibleGraph, ctx: PairingContext, allow_equal: bool = False) -> bool:
    if not (partial_gt(g, g2) or (allow_equal and g == g2)):
        return False
    diff = _sum_e(g, negative_set(g, ctx)) - _sum_e(g2, negative_set(g2, ctx))
    return effective_coeffs(diff, g2) is not None


def partial_gg(g: AdmissibleGraph, g2: AdmissibleGraph, ctx: PairingContext, allow_equal: bool = False) -> bool:
    if not (partial_gt(g, g2) or (allow_equal and g == g2)):
        return False
    for i in negative_set(g, ctx):
        if e_class(g2, i) != e_class(g, i):
            return False
    J = negative_set(g2, ctx)
    return any(pair(e_class(g, j), e_class(g, j)) == -1 for j in J)


@dataclass(frozen=True)
class Intermediate:
    graph: AdmissibleGraph
    I: frozenset[int]
    J: frozenset[int]
    J0: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"graph": self.graph.to_dict(), "I": sorted(self.I), "J": sorted(self.J), "J0": list(self.J0)}


def find_intermediate(g: AdmissibleGraph, g2: AdmissibleGraph, ctx: PairingContext) -> Intermediate:
    """Interpolate ``g >= g'' >> g2`` by turning a minimal ``J0`` into (-1)-classes.

    ``J0`` is the smallest subset of ``J - I`` (lexicographically first
    among equals) for which ``sum_I e_i - sum_{J - J0} e'_j`` is effective
    over ``g2``.
    """
    if not partial_gt(g, g2):
        raise GraphError(f"precondition: {g} > {g2} fails")
    if not special_condition(g, ctx):
        raise GraphError(f"precondition: special condition fails for {g}")
    I = negative_set(g, ctx)
    J = negative_set(g2, ctx)
    sum_I = _sum_e(g, I)
    free = sorted(J - I)
    J0 = None
    for size in range(len(free) + 1):
        for cand in itertools.combinations(free, size):
            rest = sorted(J - set(cand))
            if effective_coeffs(sum_I - _sum_e(g2, rest), g2) is not None:
                J0 = cand
                break
        if J0 is not None:
            break
    if J0 is None:
        raise GraphError(f"no subset J0 of {free} makes the class effective over {g2}")
    mid = g2.detach(J0)
    ok_first = partial_sqsupset(g, mid, ctx, allow_equal=True)
    ok_second = mid == g2 or partial_gg(mid, g2, ctx)
    if not (ok_first and ok_second):
        raise GraphError(
            f"intermediate {mid} fails verification (sqsupset={ok_first}, gg={ok_second}) for {g} > {g2}, m={ctx.m}"
        )
    return Intermediate(mid, I, J, tuple(J0))


def enumerate_admissible(n: int) -> list[AdmissibleGraph]:
    """All forests on ``1..n`` with parent < child; there are ``n!`` of them."""
    if not 1 <= n <= MAX_ENUMERATE:
        raise GraphError(f"enumeration limited to 1 <= n <= {MAX_ENUMERATE}")
    choices = [[None] + list(range(1, j)) for j in range(1, n + 1)]
    return [AdmissibleGraph(n, tuple(ps)) for ps in itertools.product(*choices)]


def iter_gt_pairs(graphs: Sequence[AdmissibleGraph]) -> Iterator[tuple[AdmissibleGraph, AdmissibleGraph]]:
    for g in graphs:
        for g2 in graphs:
            if partial_gt(g, g2):
                yield g, g2
