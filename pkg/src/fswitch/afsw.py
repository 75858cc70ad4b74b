"""Algebraic-family side of the switching calculus.

The pure invariant of a Kuranishi model ``(V, W)`` is obtained by pushing
``c1(H)^e * c_top(H (x) W)`` down the projective bundle ``P(V) -> B``; the
pushforward of ``c1(H)^k`` is the Segre class ``s_{k - rank V + 1}(V)``, and
the chain collapses to ``c_{dimB+q}(W - V)``.  The rest of the module is
integer bookkeeping for the k-step decomposition, the AF inequalities and
the local-contribution dimension counts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .exactring import GradedClass, RingPresentation
from .hirzebruch import p1_h0, p1_h1
from .kcalc import BundleSymbol, KClass, total_chern, total_segre

__all__ = [
    "AFSWError",
    "FamilyData",
    "KuranishiModel",
    "pushforward_power",
    "afsw_pure",
    "verify_cal_chain",
    "KStepKind",
    "KStep",
    "decompose_ksteps",
    "ksteps_virtual_rank",
    "ShiftedClass",
    "af_conditions",
    "class_dimension",
    "prop_zero_gap",
    "step_iv_ranges",
    "Branch",
    "residue_degree",
    "graded_pieces_vanish",
    "additivity_check",
    "extension_chern",
]


class AFSWError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyData:
    dimB: int
    q: int
    pg: int
    febd: int
    selfint: int
    kpair: int

    def __post_init__(self):
        for name in ("dimB", "q", "pg", "febd"):
            if getattr(self, name) < 0:
                raise AFSWError(f"{name} must be non-negative")
        if self.febd > self.pg:
            raise AFSWError(f"febd={self.febd} exceeds p_g={self.pg}")
        if (self.selfint - self.kpair) % 2:
            raise AFSWError("C.C - C.K must be even")

    @property
    def half_index(self) -> int:
        """``(C.C - C.K)/2``."""
        return (self.selfint - self.kpair) // 2

    def rank_difference(self, use_febd: bool = False) -> int:
        """Expected ``rank V - rank W``."""
        excess = self.febd if use_febd else self.pg
        return self.half_index + excess - self.q + 1


@dataclass(frozen=True)
class KuranishiModel:
    v: BundleSymbol
    w: BundleSymbol

    @property
    def ring(self) -> RingPresentation:
        ring = self.v.ring or self.w.ring
        if ring is None:
            raise AFSWError("model has no ring (both bundles of rank 0?)")
        return ring

    @classmethod
    def formal(cls, ring: RingPresentation, rank_v: int, rank_w: int) -> "KuranishiModel":
        return cls(BundleSymbol.formal("V", ring, "v", rank=rank_v), BundleSymbol.formal("W", ring, "w", rank=rank_w))

    @staticmethod
    def formal_ring(rank_v: int, rank_w: int, truncation: int, **extra: int) -> RingPresentation:
        degrees = {f"v{i}": i for i in range(1, rank_v + 1)}
        degrees.update({f"w{i}": i for i in range(1, rank_w + 1)})
        degrees.update(extra)
        return RingPresentation.build(truncation, **degrees)


def pushforward_power(k: int, v: BundleSymbol, ring: RingPresentation | None = None) -> GradedClass:
    """Pushforward of ``c1(H)^k`` from ``P(V)``: ``s_{k - rank V + 1}(V)``."""
    if k < 0:
        raise AFSWError("power must be non-negative")
    ring = ring or v.ring
    idx = k - v.rank + 1
    if idx < 0 or idx > ring.truncation:
        return ring.zero()
    return total_segre(KClass.of(v), ring).grade(idx)


def _check_ranks(model: KuranishiModel, fam: FamilyData, use_febd: bool):
    want = fam.rank_difference(use_febd)
    got = model.v.rank - model.w.rank
    if got != want:
        raise AFSWError(f"rank V - rank W = {got}, expected {want}")


def _eta_degree(eta: GradedClass | None) -> int:
    if eta is None:
        return 0
    for d in range(eta.ring.truncation + 1):
        if eta.is_homogeneous(d):
            return d
    raise AFSWError("insertion must be homogeneous")


def afsw_pure(model: KuranishiModel, fam: FamilyData, eta: GradedClass | None = None, use_febd: bool = False) -> GradedClass:
    """``c_{dimB+q}(W - V)``, or ``eta * c_{dimB+q-deg eta}(W - V)`` with an insertion."""
    _check_ranks(model, fam, use_febd)
    ring = model.ring
    top = fam.dimB + fam.q - _eta_degree(eta)
    if top < 0:
        return ring.zero()
    c = total_chern(KClass.of(model.w) - KClass.of(model.v), ring).grade(top)
    return c if eta is None else c * eta


def verify_cal_chain(model: KuranishiModel, fam: FamilyData, eta: GradedClass | None = None, use_febd: bool = False) -> bool:
    """Recompute the invariant through the projective-bundle pushforward and compare.

    Checks, term by term, that
    ``q_*(H^e c_top(H (x) W))`` (with ``e = (C^2 - C.K)/2 + dimB + p_g``),
    ``sum_{m <= rank W} s_{dimB+q-m}(V) c_m(W)`` and ``c_{dimB+q}(W - V)``
    coincide.
    """
    _check_ranks(model, fam, use_febd)
    if model.v.rank < 1:
        raise AFSWError("P(V) is empty for rank V = 0; the pushforward chain needs rank V >= 1")
    ring = model.ring
    g = _eta_degree(eta)
    excess = fam.febd if use_febd else fam.pg
    e = fam.half_index + (fam.dimB - g) + excess
    rw = model.w.rank
    cw = model.w.chern_classes(ring)
    # c_top(H (x) W) = sum_j H^j c_{rw-j}(W); a term with e + j < 0 would
    # land on s_{<= -rank V} = 0
    pushed = ring.zero()
    for j in range(max(0, -e), rw + 1):
        pushed = pushed + pushforward_power(e + j, model.v, ring) * cw[rw - j]
    top = fam.dimB - g + fam.q
    segre = total_segre(KClass.of(model.v), ring)
    chain = ring.zero()
    if top >= 0:
        for m in range(0, min(rw, top) + 1):
            if top - m <= ring.truncation:
                chain = chain + segre.grade(top - m) * cw[m]
    target = afsw_pure(model, fam, eta, use_febd)
    if eta is not None:
        pushed, chain = pushed * eta, chain * eta
    return pushed == chain == target


class KStepKind(str, enum.Enum):
    R0 = "R0"
    ZERO_TERM = "ZERO_TERM"
    R1_NEG = "R1_NEG"


@dataclass(frozen=True)
class KStep:
    p: int
    kind: KStepKind
    rank: int

    @property
    def signed_rank(self) -> int:
        return -self.rank if self.kind is KStepKind.R1_NEG else self.rank

    def to_dict(self) -> dict:
        return {"p": self.p, "kind": self.kind.value, "rank": self.rank}


def decompose_ksteps(k: int, degs: Sequence[int]) -> list[KStep]:
    """Classify ``pi_*(O_C(pC) (x) E_C)`` for ``p = 1..k`` by its fiber degree."""
    if k < 1 or len(degs) != k:
        raise AFSWError(f"need k >= 1 and exactly k degrees (k={k}, got {len(degs)})")
    out = []
    for p, d in enumerate(degs, 1):
        if d >= 0:
            out.append(KStep(p, KStepKind.R0, p1_h0(d)))
        elif d == -1:
            out.append(KStep(p, KStepKind.ZERO_TERM, 0))
        else:
            out.append(KStep(p, KStepKind.R1_NEG, p1_h1(d)))
    return out


def ksteps_virtual_rank(steps: Sequence[KStep]) -> int:
    return sum(s.signed_rank for s in steps)


@dataclass(frozen=True)
class ShiftedClass:
    """Intersection data of ``C + k PD(C)``."""

    selfint: int
    kpair: int
    febd: int


def af_conditions(fam: FamilyData, shifted: ShiftedClass) -> tuple[bool, bool]:
    if fam.febd > shifted.febd:
        raise AFSWError(f"febd must not decrease under switching ({fam.febd} > {shifted.febd})")
    af1 = 2 * (fam.dimB + fam.febd) + fam.selfint - fam.kpair >= 0
    af2 = 2 * (fam.dimB + shifted.febd) + shifted.selfint - shifted.kpair >= 0
    return af1, af2


def class_dimension(selfint: int, kpair: int) -> int:
    num = selfint - kpair
    if num % 2:
        raise AFSWError("X.X - X.K must be even")
    return num // 2


def prop_zero_gap(e_sq: int, e_dot_K: int, e_dot_C: int) -> int:
    """``dim(C) - dim(C - e) - dim(e)`` for an exceptional class ``e`` with ``e.C > e.e``.

    ``dim`` is the expected dimension ``(X.X - X.K)/2``; the values of
    ``C.C`` and ``C.K`` cancel, so they are fixed at zero here.
    """
    if e_dot_C <= e_sq:
        raise AFSWError(f"need e.C > e.e (got e.C={e_dot_C}, e.e={e_sq})")
    c_sq = c_k = 0
    twice = (c_sq - c_k) - ((c_sq - 2 * e_dot_C + e_sq) - (c_k - e_dot_K)) - (e_sq - e_dot_K)
    gap = twice // 2
    if gap <= 0:
        raise AFSWError(f"dimension gap {gap} is not positive")
    return gap


def step_iv_ranges(m: int, e: int, rankN: int, rankG: int) -> tuple[int, int]:
    """``(rank G - rank N, m - rank N)``: summation start and ``dim X'``."""
    return rankG - rankN, m - rankN


class Branch(str, enum.Enum):
    FIRST = "FIRST"
    SECOND = "SECOND"


def residue_degree(me_plus_e_dot_e: int) -> tuple[int, Branch]:
    if me_plus_e_dot_e >= 0:
        return me_plus_e_dot_e, Branch.FIRST
    return -me_plus_e_dot_e, Branch.SECOND


def graded_pieces_vanish(chern: GradedClass, segre: GradedClass, degrees: Sequence[int]) -> bool:
    """True iff ``{c * s}_d = 0`` for every listed degree inside the truncation."""
    prod = chern * segre
    return all(not prod.grade(d) for d in degrees if 0 <= d <= prod.ring.truncation)


def additivity_check(pieces: Sequence[tuple[GradedClass, GradedClass]], combined: GradedClass, degree: int) -> bool:
    """Sum of the degree-``degree`` parts of ``c_i * s_i`` against that of ``combined``."""
    acc = combined.ring.zero()
    for c, s in pieces:
        acc = acc + (c * s).grade(degree)
    return acc == combined.grade(degree)


def extension_chern(sub: KClass, quotient: KClass, ring: RingPresentation) -> GradedClass:
    """``c`` of the middle term of ``0 -> sub -> middle -> quotient -> 0``."""
    return total_chern(sub + quotient, ring)
