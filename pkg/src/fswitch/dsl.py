"""A small expression language over Chern/Segre classes and K-classes.

Grammar (``*`` binds tighter than ``+``/``-``)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := NUMBER | NUMBER '/' NUMBER | IDENT | call | '(' expr ')' | '-' factor
    call   := FUNC '(' expr (',' expr)* ')'

with ``FUNC`` one of ``c s rank grade sym dual twist``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .exactring import Generator, GradedClass, RingPresentation
from .kcalc import BundleSymbol, KClass, LineTag, Twist, dual, rank, sym_power, tensor_line, total_chern, total_segre

__all__ = [
    "DSLError",
    "DSLSyntaxError",
    "DSLEvalError",
    "Num",
    "Ident",
    "Neg",
    "BinOp",
    "Call",
    "Expr",
    "FUNCTIONS",
    "parse",
    "to_source",
    "Environment",
    "evaluate",
    "parse_binding",
]

FUNCTIONS = {"c": 1, "s": 1, "rank": 1, "grade": 2, "sym": 2, "dual": 1, "twist": 2}


class DSLError(ValueError):
    pass


class DSLSyntaxError(DSLError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class DSLEvalError(DSLError):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = Union[Num, Ident, Neg, BinOp, Call]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise DSLSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = mt.lastgroup
        out.append((kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind == "end":
            got = "end of input" if kind == "end" else repr(val)
            raise DSLSyntaxError(f"expected {value!r}, got {got}", off)

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            left = BinOp("*", left, self.factor())
        return left

    def factor(self) -> Expr:
        kind, val, off = self.take()
        if kind == "num":
            if "/" in val:
                p, q = (int(x) for x in val.split("/"))
                if q == 0:
                    raise DSLSyntaxError("zero denominator", off)
                return Num(Fraction(p, q))
            return Num(Fraction(int(val)))
        if kind == "ident":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if val not in FUNCTIONS:
                    raise DSLSyntaxError(f"unknown function {val!r}", off)
                self.take()
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[val]:
                    raise DSLSyntaxError(f"{val} takes {FUNCTIONS[val]} argument(s), got {len(args)}", off)
                return Call(val, tuple(args))
            return Ident(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "op" and val == "-":
            return Neg(self.factor())
        got = "end of input" if kind == "end" else repr(val)
        raise DSLSyntaxError(f"unexpected {got}", off)


def parse(text: str) -> Expr:
    p = _Parser(text)
    tree = p.expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise DSLSyntaxError(f"unexpected {val!r}", off)
    return tree


def to_source(e: Expr, prec: int = 0) -> str:
    """Print ``e`` with the minimal parentheses needed to parse back to ``e``."""
    if isinstance(e, Num):
        v = e.value
        text = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        # negative literals only arise programmatically; they reparse as Neg
        return f"({text})" if v < 0 else text
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_source(a) for a in e.args)})"
    if isinstance(e, Neg):
        return "-" + to_source(e.operand, 3)
    if isinstance(e, BinOp):
        mine = 2 if e.op == "*" else 1
        text = f"{to_source(e.left, mine)} {e.op} {to_source(e.right, mine + 1)}"
        return f"({text})" if mine < prec else text
    raise DSLError(f"not an expression: {e!r}")


Value = Union[KClass, GradedClass, Fraction]


@dataclass
class Environment:
    ring: RingPresentation
    bindings: dict[str, Value | BundleSymbol] = field(default_factory=dict)

    def lookup(self, name: str) -> Value:
        if name in self.bindings:
            v = self.bindings[name]
            if isinstance(v, BundleSymbol):
                return KClass.of(v)
            if isinstance(v, int):
                return Fraction(v)
            return v
        if name in self.ring.names:
            return self.ring.gen(name)
        raise DSLEvalError(f"unbound identifier {name!r}")

    @classmethod
    def from_bindings(cls, specs: list[str], truncation: int = 4) -> "Environment":
        """Build ring and symbols from ``name=rank<k>[:roots a,b,...]`` specs.

        Without roots, the symbol gets formal Chern classes ``<name>_c1..``.
        Root names become degree-1 generators.
        """
        parsed = [parse_binding(s) for s in specs]
        gens: list[Generator] = []
        seen: set[str] = set()
        for name, k, roots in parsed:
            if name in seen:
                raise DSLError(f"{name} bound twice")
            seen.add(name)
            names = roots if roots is not None else [f"{name}_c{i}" for i in range(1, k + 1)]
            for j, g in enumerate(names, 1):
                if g not in {x.name for x in gens}:
                    gens.append(Generator(g, 1 if roots is not None else j))
        ring = RingPresentation(tuple(gens), truncation)
        env = cls(ring)
        for name, k, roots in parsed:
            if roots is not None:
                env.bindings[name] = BundleSymbol.split(name, (ring.gen(r) for r in roots))
            else:
                env.bindings[name] = BundleSymbol.formal(name, ring, f"{name}_c", rank=k)
        return env


_BINDING = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*rank\s*(\d+)\s*(?::\s*roots\s+(.*))?$")


def parse_binding(spec: str) -> tuple[str, int, list[str] | None]:
    mt = _BINDING.match(spec)
    if not mt:
        raise DSLError(f"bad binding {spec!r}; expected name=rank<k>[:roots a,b,...]")
    name, k = mt.group(1), int(mt.group(2))
    roots = None
    if mt.group(3) is not None:
        roots = [r.strip() for r in mt.group(3).split(",") if r.strip()]
        if len(roots) != k:
            raise DSLError(f"{name}: {len(roots)} roots given for rank {k}")
        for r in roots:
            if not r.isidentifier():
                raise DSLError(f"{name}: root {r!r} is not an identifier")
    return name, k, roots


def _kind(v) -> str:
    if isinstance(v, KClass):
        return "K-class"
    if isinstance(v, GradedClass):
        return "class"
    return "number"


def _as_int(v, what: str) -> int:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    raise DSLEvalError(f"{what} must be an integer, got {_kind(v)} {v}")


def _need(v, typ, func: str):
    if not isinstance(v, typ):
        raise DSLEvalError(f"{func}() got a {_kind(v)}")
    return v


def _line_twist(v, label: str) -> LineTag:
    if isinstance(v, GradedClass):
        if not v.is_homogeneous(1) and v:
            raise DSLEvalError("twist class must have degree 1")
        return LineTag(label, v)
    if isinstance(v, KClass):
        terms = list(v.items())
        if len(terms) == 1 and terms[0][1] == 1 and terms[0][0][0].rank == 1:
            (sym, tw), _ = terms[0]
            ring = sym.ring
            c1 = sym.chern_classes(ring)[1] + (tw.c1(ring) if tw else ring.zero())
            return LineTag(label, c1)
    raise DSLEvalError("twist() needs a line bundle or a degree-1 class")


def evaluate(e: Expr | str, env: Environment) -> Value:
    if isinstance(e, str):
        e = parse(e)
    ring = env.ring
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Ident):
        return env.lookup(e.name)
    if isinstance(e, Neg):
        v = evaluate(e.operand, env)
        return -v
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, env), evaluate(e.right, env)
        if isinstance(a, KClass) or isinstance(b, KClass):
            if e.op in "+-":
                if not (isinstance(a, KClass) and isinstance(b, KClass)):
                    raise DSLEvalError(f"cannot {e.op} a {_kind(a)} and a {_kind(b)}")
                return a + b if e.op == "+" else a - b
            if isinstance(a, KClass) and isinstance(b, KClass):
                raise DSLEvalError("tensor products of K-classes are not supported")
            n = _as_int(b if isinstance(a, KClass) else a, "K-class multiplier")
            return n * (a if isinstance(a, KClass) else b)
        if isinstance(a, Fraction) and isinstance(b, GradedClass):
            a = ring.scalar(a)
        if isinstance(b, Fraction) and isinstance(a, GradedClass):
            b = ring.scalar(b)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        return a * b
    if isinstance(e, Call):
        args = [evaluate(a, env) for a in e.args]
        f = e.func
        if f == "c":
            return total_chern(_need(args[0], KClass, f), ring)
        if f == "s":
            return total_segre(_need(args[0], KClass, f), ring)
        if f == "rank":
            return Fraction(rank(_need(args[0], KClass, f)))
        if f == "grade":
            x = args[0]
            if isinstance(x, Fraction):
                x = ring.scalar(x)
            _need(x, GradedClass, f)
            d = _as_int(args[1], "grade degree")
            if not 0 <= d <= ring.truncation:
                raise DSLEvalError(f"grade degree {d} outside 0..{ring.truncation}")
            return x.grade(d)
        if f == "sym":
            k = _need(args[0], KClass, f)
            d = _as_int(args[1], "symmetric power")
            terms = list(k.items())
            if len(terms) != 1 or terms[0][1] != 1:
                raise DSLEvalError("sym() needs a single bundle, not a virtual combination")
            (symbol, tw), _ = terms[0]
            out = sym_power(symbol, d)
            if tw:
                # S^d(U (x) t) = S^d(U) (x) t^d
                out = tensor_line(out, Twist(tuple((tag, d * p) for tag, p in tw.parts)))
            return out
        if f == "dual":
            return dual(_need(args[0], KClass, f))
        if f == "twist":
            k = _need(args[0], KClass, f)
            return tensor_line(k, _line_twist(args[1], to_source(e.args[1])))
    raise DSLEvalError(f"cannot evaluate {e!r}")
