"""Family switching for a -n rational curve.

``L`` has degree ``m`` on the fibers of the curve family ``C -> B`` and
``C.C = -n`` fiberwise.  Switching ``L`` to ``L_k = L + 2k PD(C)`` goes
through ``k`` steps; step ``p`` contributes the pushforward of the line
bundle ``P (x) N^p`` (``P = sqrt(L (x) K)|_C``, ``N`` the normal bundle),
which has fiber degree ``delta/2 - 1`` with ``delta = m - (2p-1) n``.
Depending on the sign of ``delta`` the step is an ``R^0`` piece, an
``R^1`` piece, or nothing at all.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .exactring import GradedClass, RingPresentation
from .hirzebruch import p1_h0, p1_h1
from .kcalc import (
    BundleSymbol,
    KClass,
    LineTag,
    k_equal,
    rank,
    sym_power,
    tensor_line,
    total_chern,
    total_segre,
)

__all__ = [
    "SwitchError",
    "StepKind",
    "SwitchBase",
    "SwitchProblem",
    "StepRecord",
    "SwitchReport",
    "SymPiece",
    "ExpansionTerm",
    "expected_dim_delta",
    "analyze",
    "relative_obstruction",
    "decompose_sym",
    "sym_kclass",
    "expand_switch",
    "expand_inverse",
    "compose_expansions",
    "check_consistency",
    "gt_rank_check",
]


class SwitchError(ValueError):
    pass


class StepKind(str, enum.Enum):
    R0 = "R0"
    ZERO = "ZERO"
    R1 = "R1"


@dataclass(frozen=True)
class SwitchBase:
    """Data making the curve family ``P(U)`` over ``B`` explicit."""

    ring: RingPresentation
    u: BundleSymbol
    sqrt_l0: LineTag

    @classmethod
    def standard(cls, truncation: int = 4, roots: bool = False) -> "SwitchBase":
        """``U`` with formal ``c1, c2`` (or Chern roots ``u1, u2``) and ``c1(sqrt L0) = l``."""
        if roots:
            ring = RingPresentation.build(truncation, u1=1, u2=1, l=1)
            u = BundleSymbol.split("U", (ring.gen("u1"), ring.gen("u2")))
        else:
            ring = RingPresentation.build(truncation, c1=1, c2=2, l=1)
            u = BundleSymbol.formal("U", ring, "c", rank=2)
        return cls(ring, u, LineTag("sqrtL0", ring.gen("l")))

    def __post_init__(self):
        if self.u.rank != 2:
            raise SwitchError("U must have rank 2")


@dataclass(frozen=True)
class SwitchProblem:
    m: int
    n: int
    k: int
    base: SwitchBase | None = None

    def __post_init__(self):
        if self.n < 1:
            raise SwitchError(f"n must be positive, got {self.n}")
        if self.k < 0:
            raise SwitchError(f"k must be non-negative, got {self.k}")
        if (self.m + self.n) % 2:
            raise SwitchError(f"m + n must be even (m={self.m}, n={self.n})")


@dataclass(frozen=True)
class StepRecord:
    p: int
    delta: int
    kind: StepKind
    piece_rank: int
    sym_exponent: int | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "delta": self.delta,
            "kind": self.kind.value,
            "piece_rank": self.piece_rank,
            "sym_exponent": self.sym_exponent,
        }


@dataclass(frozen=True)
class SwitchReport:
    problem: SwitchProblem
    steps: tuple[StepRecord, ...]
    v_class: KClass
    virtual_rank: int
    chern_of_v: GradedClass | None = None

    def to_dict(self) -> dict:
        p = self.problem
        return {
            "m": p.m,
            "n": p.n,
            "k": p.k,
            "steps": [s.to_dict() for s in self.steps],
            "v_class": str(self.v_class),
            "virtual_rank": self.virtual_rank,
            "rank_formula": (p.k * p.k * p.n - p.k * p.m) // 2,
            "chern_of_v": None if self.chern_of_v is None else str(self.chern_of_v),
        }


def expected_dim_delta(m: int, n: int, p: int) -> int:
    if (m + n) % 2:
        raise SwitchError(f"m + n must be even (m={m}, n={n})")
    if n < 1 or p < 1:
        raise SwitchError("need n >= 1 and p >= 1")
    return m - (2 * p - 1) * n


def _step(m: int, n: int, p: int, with_sym: bool) -> StepRecord:
    delta = expected_dim_delta(m, n, p)
    deg = delta // 2 - 1  # fiber degree of P (x) N^p
    r0, r1 = p1_h0(deg), p1_h1(deg)
    if delta > 0:
        kind, piece = StepKind.R0, r0
        assert r1 == 0
    elif delta < 0:
        kind, piece = StepKind.R1, r1
        assert r0 == 0
    else:
        kind, piece = StepKind.ZERO, 0
        assert r0 == r1 == 0
    assert piece == abs(delta) // 2
    sym = None
    if with_sym and kind is not StepKind.ZERO:
        sym = piece - 1
    return StepRecord(p, delta, kind, piece, sym)


def _piece_symbol(kind: StepKind, exponent: int, rank_: int) -> BundleSymbol:
    return BundleSymbol.abstract(f"R{kind.value[-1]}pi(P(x)N^{exponent})", rank_)


def relative_obstruction(m: int, n: int, k: int, exponent_offset: int = 0) -> KClass:
    """``V_{1->k}`` as a combination of labelled pushforward pieces.

    Pieces are labelled by their ``N`` exponent measured from the ``P`` of a
    reference line bundle ``exponent_offset`` steps earlier.
    """
    out = KClass()
    for p in range(1, k + 1):
        s = _step(m, n, p, False)
        if s.kind is StepKind.ZERO:
            continue
        sign = 1 if s.kind is StepKind.R1 else -1
        out = out + KClass.of(_piece_symbol(s.kind, p + exponent_offset, s.piece_rank), sign)
    return out


@dataclass(frozen=True)
class SymPiece:
    p: int
    sign: int
    exponent: int
    dual: bool
    twist: str = "sqrtL0"

    def to_dict(self) -> dict:
        return {"p": self.p, "sign": self.sign, "exponent": self.exponent, "dual": self.dual, "twist": self.twist}


def decompose_sym(problem: SwitchProblem) -> list[SymPiece]:
    """Symmetric-power pieces: ``+S^e(U)`` for ``delta > 0``, ``-S^e(U*)`` for ``delta < 0``."""
    m, n = problem.m, problem.n
    out = []
    for p in range(1, problem.k + 1):
        delta = expected_dim_delta(m, n, p)
        if delta > 0:
            e, sign, is_dual = (m + n) // 2 - p * n - 1, 1, False
        elif delta < 0:
            e, sign, is_dual = -(m + n) // 2 + p * n - 1, -1, True
        else:
            continue
        if e < 0:
            raise SwitchError(f"negative symmetric exponent {e} at step {p}")
        out.append(SymPiece(p, sign, e, is_dual))
    return out


def sym_kclass(problem: SwitchProblem) -> KClass:
    """The K-class ``sum +-S^e(U or U*) (x) sqrt(L0)`` listed by :func:`decompose_sym`."""
    base = problem.base
    if base is None:
        raise SwitchError("symmetric-power decomposition needs base data (U, L0)")
    u_dual = base.u.dual()
    out = KClass()
    for piece in decompose_sym(problem):
        s = sym_power(u_dual if piece.dual else base.u, piece.exponent)
        out = out + piece.sign * tensor_line(s, base.sqrt_l0)
    return out


def analyze(problem: SwitchProblem) -> SwitchReport:
    m, n, k = problem.m, problem.n, problem.k
    with_sym = problem.base is not None
    steps = tuple(_step(m, n, p, with_sym) for p in range(1, k + 1))
    virtual_rank = sum(s.piece_rank if s.kind is StepKind.R1 else -s.piece_rank for s in steps)
    chern = None
    if with_sym:
        # V = (+)R1 pieces (-) R0 pieces, the negative of the symmetric-power listing
        v_class = -sym_kclass(problem)
        chern = total_chern(v_class, problem.base.ring)
    else:
        v_class = relative_obstruction(m, n, k)
    assert rank(v_class) == virtual_rank
    return SwitchReport(problem, steps, v_class, virtual_rank, chern)


@dataclass(frozen=True)
class ExpansionTerm:
    index: int
    coefficient: GradedClass
    target: str

    def to_dict(self) -> dict:
        return {"index": self.index, "coefficient": str(self.coefficient), "target": self.target}


def _v_and_ring(source: SwitchReport | KClass, insertion: GradedClass):
    if isinstance(source, SwitchReport):
        if source.problem.base is None:
            raise SwitchError("expansion needs base data so that c(V) is computable")
        return source.v_class, source.problem.base.ring
    return source, insertion.ring


def _expand(total: GradedClass, insertion: GradedClass, target: str) -> list[ExpansionTerm]:
    out = []
    for i in range(total.ring.truncation + 1):
        coeff = total.grade(i) * insertion
        if coeff:
            out.append(ExpansionTerm(i, coeff, target))
    return out


def expand_switch(source: SwitchReport | KClass, insertion: GradedClass) -> list[ExpansionTerm]:
    """``FSW(c, L_k) = sum_i FSW(c_i(V) c, L)`` as a list of coefficient terms."""
    v, ring = _v_and_ring(source, insertion)
    return _expand(total_chern(v, ring), insertion, "FSW(., L)")


def expand_inverse(source: SwitchReport | KClass, insertion: GradedClass) -> list[ExpansionTerm]:
    """``FSW(c, L) = sum_j FSW(s_j(V) c, L_k)``."""
    v, ring = _v_and_ring(source, insertion)
    return _expand(total_segre(v, ring), insertion, "FSW(., L_k)")


def compose_expansions(source: SwitchReport | KClass, insertion: GradedClass) -> GradedClass:
    """Push ``FSW(c, L_k)`` to ``L`` and back; returns the net insertion at ``L_k``."""
    v, ring = _v_and_ring(source, insertion)
    c, s = total_chern(v, ring), total_segre(v, ring)
    out = insertion.ring.zero()
    for term in _expand(c, insertion, "FSW(., L)"):
        for back in _expand(s, term.coefficient, "FSW(., L_k)"):
            out = out + back.coefficient
    return out


def check_consistency(m: int, n: int, k1: int, k2: int) -> bool:
    """Switching ``k1`` then ``k2`` steps agrees in K with switching ``k1 + k2``."""
    if (m + n) % 2:
        raise SwitchError(f"m + n must be even (m={m}, n={n})")
    v12 = relative_obstruction(m, n, k1)
    # L_{k1} has fiber degree m - 2 k1 n; its P is P (x) N^{k1}
    v23 = relative_obstruction(m - 2 * k1 * n, n, k2, exponent_offset=k1)
    v13 = relative_obstruction(m, n, k1 + k2)
    return k_equal(v12 + v23, v13)


def gt_rank_check(m: int, n: int, k: int) -> tuple[int, int, bool]:
    """Rank of ``V_{1->k}`` versus the alternative sum over ``R^1 pi_*(N^i)`` and ``S^{-q-1}``."""
    if (m + n) % 2:
        raise SwitchError(f"m + n must be even (m={m}, n={n})")
    q = (m + n - 2) // 2
    if q >= 0:
        raise SwitchError(f"needs deg P = {q} < 0")
    lhs = analyze(SwitchProblem(m, n, k)).virtual_rank
    rhs = sum(p1_h1(-i * n) - q for i in range(1, k + 1))
    return lhs, rhs, lhs == rhs
