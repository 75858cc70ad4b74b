"""Line bundles on the Hirzebruch surface F_n.

Divisors are written ``a*F + b*C-`` with ``F`` the fiber class
(``F.F = 0``) and ``C-`` the negative section (``C-.C- = -n``,
``F.C- = 1``).  ``h0`` pushes forward to the base P^1:
``pi_* O(aF + bC-) = sum_{j=0..b} O(a - j n)`` for ``b >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "HirzebruchError",
    "FnDivisor",
    "intersect",
    "canonical",
    "is_effective",
    "h0",
    "h1",
    "h2",
    "chi",
    "p1_h0",
    "p1_h1",
    "TwistChoice",
    "twisted_divisor",
    "choose_b",
]


class HirzebruchError(ValueError):
    pass


@dataclass(frozen=True)
class FnDivisor:
    n: int
    a: int
    b: int

    def __post_init__(self):
        if self.n < 1:
            raise HirzebruchError(f"F_n needs n >= 1, got n={self.n}")

    def __add__(self, other: "FnDivisor") -> "FnDivisor":
        _same_n(self, other)
        return FnDivisor(self.n, self.a + other.a, self.b + other.b)

    def __neg__(self) -> "FnDivisor":
        return FnDivisor(self.n, -self.a, -self.b)

    def __sub__(self, other: "FnDivisor") -> "FnDivisor":
        return self + (-other)

    def __str__(self):
        return f"{self.a}F{self.b:+d}C- on F_{self.n}"


def _same_n(d1: FnDivisor, d2: FnDivisor):
    if d1.n != d2.n:
        raise HirzebruchError(f"divisors live on F_{d1.n} and F_{d2.n}")


def intersect(d1: FnDivisor, d2: FnDivisor) -> int:
    _same_n(d1, d2)
    return d1.a * d2.b + d2.a * d1.b - d1.n * d1.b * d2.b


def canonical(n: int) -> FnDivisor:
    # K = -2F - C+ - C-, C+ = C- + nF
    return FnDivisor(n, -(n + 2), -2)


def is_effective(d: FnDivisor) -> bool:
    return d.a >= 0 and d.b >= 0


def h0(d: FnDivisor) -> int:
    if d.b < 0:
        return 0
    return sum(max(0, d.a - j * d.n + 1) for j in range(d.b + 1))


def h2(d: FnDivisor) -> int:
    return h0(canonical(d.n) - d)


def chi(d: FnDivisor) -> int:
    K = canonical(d.n)
    num = intersect(d, d) - intersect(d, K)
    if num % 2:
        raise HirzebruchError(f"Riemann-Roch numerator {num} is odd for {d}")
    return 1 + num // 2


def h1(d: FnDivisor) -> int:
    value = h0(d) + h2(d) - chi(d)
    if value < 0:
        raise HirzebruchError(f"h1({d}) = {value} < 0: h0 model and Riemann-Roch disagree")
    return value


def p1_h0(deg: int) -> int:
    return max(deg + 1, 0)


def p1_h1(deg: int) -> int:
    return max(-deg - 1, 0)


def twisted_divisor(a: int, n: int, b: int) -> FnDivisor:
    """``((a-n+bn)/2 - 1) F + (b/2 - 1) C-`` for even ``b`` and ``a+n`` even."""
    if (a + n) % 2 or b % 2:
        raise HirzebruchError(f"need a+n and b even (a={a}, n={n}, b={b})")
    return FnDivisor(n, (a - n + b * n) // 2 - 1, b // 2 - 1)


@dataclass(frozen=True)
class TwistChoice:
    b: int
    divisor: FnDivisor
    recipe_b: int
    recipe_ok: bool
    warnings: tuple[str, ...] = field(default=())


def _recipe_b(a: int, n: int) -> int:
    if (a - n) // 2 - 1 < 0:
        return 0
    # non-positive even b with 0 <= (a+n+bn)/2 - 1 < n
    for b in range(0, -2 * (abs(a) + n + 2) - 1, -2):
        v = (a + n + b * n) // 2 - 1
        if 0 <= v < n:
            return b
    raise HirzebruchError(f"no recipe b for a={a}, n={n}")


def _vanishes(d: FnDivisor) -> bool:
    return h0(d) == 0 and h2(d) == 0


def choose_b(a: int, n: int) -> TwistChoice:
    """Pick an even ``b`` killing both ``h0`` and ``h2`` of the twisted divisor.

    The explicit recipe is tried first and then checked against ``h0``/``h2``;
    if it fails, even ``b`` in ``[-2(|a|+n+2), 0]`` are searched and the
    disagreement is reported in ``warnings``.
    """
    if n < 1:
        raise HirzebruchError(f"F_n needs n >= 1, got n={n}")
    if (a + n) % 2:
        raise HirzebruchError(f"a + n must be even (a={a}, n={n})")
    warnings = []
    try:
        rb = _recipe_b(a, n)
    except HirzebruchError as exc:
        rb = None
        warnings.append(str(exc))
    if rb is not None:
        d = twisted_divisor(a, n, rb)
        if _vanishes(d):
            return TwistChoice(rb, d, rb, True)
        warnings.append(f"recipe b={rb} gives h0={h0(d)}, h2={h2(d)} for a={a}, n={n}; searching")
    for b in range(0, -2 * (abs(a) + n + 2) - 1, -2):
        d = twisted_divisor(a, n, b)
        if _vanishes(d):
            return TwistChoice(b, d, rb if rb is not None else b, False, tuple(warnings))
    raise HirzebruchError(f"no even b in [{-2 * (abs(a) + n + 2)}, 0] kills h0 and h2 for a={a}, n={n}")
