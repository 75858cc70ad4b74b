"""Independent reference computations used by the tests."""

import itertools
import random
from fractions import Fraction

import sympy as sp
from sympy.polys.polyfuncs import symmetrize

from fswitch.exactring import GradedClass, RingPresentation
from fswitch.kcalc import BundleSymbol, KClass, LineTag, Twist


def lattice_h0(n, a, b):
    """Count monomial sections: pairs (i, j) with 0 <= j <= b, 0 <= i <= a - j n."""
    return sum(1 for j in range(0, b + 1) for i in range(0, a - j * n + 1))


def sym_power_chern_elementary(d, truncation):
    """c(S^d U) through c1, c2 via sympy's symmetric reduction; dict {(e1, e2): coeff}."""
    u1, u2 = sp.symbols("u1 u2")
    prod = sp.expand(sp.prod([1 + i * u1 + (d - i) * u2 for i in range(d + 1)]))
    sym, rem, defs = symmetrize(prod, [u1, u2], formal=True)
    assert rem == 0
    s1, s2 = defs[0][0], defs[1][0]
    poly = sp.Poly(sym, s1, s2)
    out = {}
    for (e1, e2), c in poly.terms():
        if e1 + 2 * e2 <= truncation:
            out[(e1, e2)] = Fraction(int(c.p), int(c.q))
    return out


def to_sympy(x: GradedClass):
    syms = sp.symbols(list(x.ring.names))
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    expr = 0
    for m, c in x.items():
        term = sp.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s**e
        expr += term
    return sp.expand(expr)


def brute_effective(x, g, bound):
    """Search c in [0, bound]^n with sum c_j e_j(g) = x."""
    from fswitch.adgraph import e_class

    n = g.n
    es = [e_class(g, j) for j in range(1, n + 1)]
    for cs in itertools.product(range(bound + 1), repeat=n):
        tot = [0] * n
        for c, e in zip(cs, es):
            for k in range(n):
                tot[k] += c * e.coeffs[k]
        if tuple(tot) == x.coeffs:
            return cs
    return None


def forest_count(n):
    """Edge subsets of {(i, j): i < j} in which every vertex has at most one parent."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    count = 0
    for mask in range(1 << len(pairs)):
        chosen = [pairs[t] for t in range(len(pairs)) if mask >> t & 1]
        children = [c for _p, c in chosen]
        if len(children) == len(set(children)):
            count += 1
    return count


def random_ring(rng, truncation):
    return RingPresentation.build(truncation, x=1, y=1, z=1, f1=1, f2=2, f3=3, f4=4)


def random_linear(rng, ring):
    out = ring.zero()
    for name in ("x", "y", "z"):
        out = out + rng.randint(-2, 2) * ring.gen(name)
    return out


def random_symbol(rng, ring, idx):
    r = rng.randint(0, 4)
    if rng.random() < 0.6:
        return BundleSymbol.split(f"B{idx}", [random_linear(rng, ring) for _ in range(r)])
    r = max(r, 1)
    chern = []
    for i in range(1, r + 1):
        term = ring.zero()
        if i <= 4 and rng.random() < 0.7:
            term = term + rng.randint(-2, 2) * ring.gen(f"f{i}")
        if rng.random() < 0.5:
            term = term + rng.randint(-2, 2) * random_linear(rng, ring) ** i
        chern.append(term)
    return BundleSymbol(f"B{idx}", r, chern=tuple(chern))


def random_kclass(rng, ring, max_terms=3):
    tag = LineTag("t", ring.gen("z"))
    out = KClass()
    for idx in range(rng.randint(1, max_terms)):
        sym = random_symbol(rng, ring, idx)
        tw = Twist.of(tag, rng.randint(-1, 1))
        out = out + KClass.of(sym, rng.choice([-2, -1, 1, 2]), tw)
    return out


def random_class(rng, ring, unit=False):
    out = ring.zero()
    names = ring.names
    for _ in range(rng.randint(0, 6)):
        mono = ring.one()
        for _ in range(rng.randint(1, 3)):
            mono = mono * ring.gen(rng.choice(names))
        out = out + Fraction(rng.randint(-5, 5), rng.randint(1, 3)) * mono
    if unit:
        out = out - out.constant() + 1
    return out
