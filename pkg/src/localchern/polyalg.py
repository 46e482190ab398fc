"""Exact multivariate polynomials over Q.

A polynomial is a sparse map from exponent tuples to nonzero ``Fraction``
coefficients.  Values are immutable; every operation returns a new object.
Terms are stored in degrevlex-descending order no matter which
``MonomialOrder`` a caller later uses for leading terms.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import PolyParseError, RingMismatchError

Exps = tuple  # tuple[int, ...]
Scalar = Union[int, Fraction]

INFINITY = math.inf


def degrevlex_key(exps: Exps) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


def negdegrevlex_key(exps: Exps) -> tuple:
    return (-sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """A term order on monomials, optionally extended to free modules.

    ``kind`` is one of ``"degrevlex"`` (global), ``"negdegrevlex"`` (local)
    or ``"elim"`` (product of two degrevlex blocks, the first ``block``
    variables being eliminated).  For module elements the component index is
    compared first (position over term); component 0 is the largest.
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "negdegrevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValueError("elimination order needs block >= 1")

    @property
    def is_local(self) -> bool:
        return self.kind == "negdegrevlex"

    def key(self, exps: Exps) -> tuple:
        if self.kind == "degrevlex":
            return degrevlex_key(exps)
        if self.kind == "negdegrevlex":
            return negdegrevlex_key(exps)
        k = self.block
        return degrevlex_key(exps[:k]) + degrevlex_key(exps[k:])

    def module_key(self, comp: int, exps: Exps) -> tuple:
        return (-comp, self.key(exps))


GLOBAL = MonomialOrder("degrevlex")
LOCAL = MonomialOrder("negdegrevlex")


class PolyRing:
    """Q[x_1, ..., x_n] with named variables."""

    __slots__ = ("variables", "_index")

    def __init__(self, variables: Iterable[str]):
        names = tuple(v.strip() for v in variables)
        if not names:
            raise ValueError("a ring needs at least one variable")
        for v in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.variables = names
        self._index = {v: i for i, v in enumerate(names)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, var: str | int) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise ValueError(f"variable index {var} out of range")
            return var
        try:
            return self._index[var]
        except KeyError:
            raise ValueError(f"unknown variable {var!r}") from None

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return f"PolyRing({', '.join(self.variables)})"

    @property
    def zero_exps(self) -> Exps:
        return (0,) * self.nvars

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: Scalar) -> Polynomial:
        return Polynomial(self, {self.zero_exps: c})

    def gen(self, var: str | int) -> Polynomial:
        i = self.index(var)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff: Scalar = 1) -> Polynomial:
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps} for {self}")
        return Polynomial(self, {exps: coeff})

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self)

    __call__ = parse

    def extend(self, names: Sequence[str], front: bool = True) -> PolyRing:
        """A ring with extra variables, used for elimination tricks."""
        return PolyRing(tuple(names) + self.variables if front else self.variables + tuple(names))


class Polynomial:
    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exps, Scalar] | None = None):
        self.ring = ring
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                clean[tuple(e)] = c if isinstance(c, Fraction) else Fraction(c)
        self._terms = {e: clean[e] for e in sorted(clean, key=degrevlex_key, reverse=True)}
        self._hash = None

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> Polynomial:
        """Wrap a dict of nonzero Fraction coefficients without re-checking."""
        p = object.__new__(cls)
        p.ring = ring
        p._terms = {e: terms[e] for e in sorted(terms, key=degrevlex_key, reverse=True)}
        p._hash = None
        return p

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exps, Fraction]]:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self.ring.zero_exps in self._terms)

    def constant_coeff(self) -> Fraction:
        return self._terms.get(self.ring.zero_exps, Fraction(0))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: str | int) -> int:
        i = self.ring.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def variables_used(self) -> set[int]:
        return {i for e in self._terms for i, a in enumerate(e) if a}

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({self.ring.zero_exps: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return Polynomial._raw(self.ring, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        return Polynomial._raw(self.ring, _mul_terms(self._terms, other._terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other.is_constant() and other:
            return self * (1 / other.constant_coeff())
        q, r = divide_exact(self, other)
        if r:
            raise ValueError("polynomial division is not exact")
        return q

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self, order: MonomialOrder = GLOBAL) -> Polynomial:
        if not self:
            return self
        c, _ = self.leading_term(order)
        return self * (1 / c)

    def primitive(self) -> Polynomial:
        """Scale to coprime integer coefficients with positive degrevlex lead."""
        if not self:
            return self
        den = 1
        for c in self._terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [int(c * den) for c in self._terms.values()]
        g = 0
        for v in nums:
            g = math.gcd(g, v)
        lead = next(iter(self._terms.values()))
        s = 1 if lead > 0 else -1
        return self * Fraction(s * den, g)

    # -- calculus and maps ----------------------------------------------
    def diff(self, var: str | int) -> Polynomial:
        i = self.ring.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Polynomial._raw(self.ring, out)

    def subs(self, images: Mapping[str | int, Polynomial] | Sequence[Polynomial],
             target: PolyRing | None = None) -> Polynomial:
        return substitute(self, images, target)

    def order(self) -> int | float:
        return order_of_vanishing(self)

    def leading_term(self, order: MonomialOrder = GLOBAL) -> tuple[Fraction, Exps]:
        return leading_term(self, order)

    def lowest_form(self) -> Polynomial:
        """Homogeneous part of lowest total degree."""
        o = self.order()
        return Polynomial._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) == o})

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)


def _mul_terms(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def poly_arith(a: Polynomial, b: Polynomial | None, op: str, k: int = 0) -> Polynomial:
    """Functional form of the ring operations: ``op`` in add, sub, mul, pow."""
    if op == "pow":
        return a ** k
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Polynomial, var: str | int) -> Polynomial:
    return p.diff(var)


def order_of_vanishing(p: Polynomial) -> int | float:
    """Lowest total degree of a term; ``INFINITY`` for zero."""
    return min((sum(e) for e in p._terms), default=INFINITY)


def leading_term(p: Polynomial, order: MonomialOrder = GLOBAL) -> tuple[Fraction, Exps]:
    if not p:
        raise ValueError("the zero polynomial has no leading term")
    e = max(p._terms, key=order.key)
    return p._terms[e], e


def substitute(p: Polynomial, images: Mapping[str | int, Polynomial] | Sequence[Polynomial],
               target: PolyRing | None = None) -> Polynomial:
    """Pull ``p`` back along the ring map x_i -> images[i]."""
    ring = p.ring
    if isinstance(images, Mapping):
        by_index = {ring.index(k): v for k, v in images.items()}
    else:
        by_index = dict(enumerate(images))
    missing = [ring.variables[i] for i in range(ring.nvars) if i not in by_index]
    if missing:
        raise ValueError(f"no image given for {', '.join(missing)}")
    imgs = [by_index[i] for i in range(ring.nvars)]
    if target is None:
        target = imgs[0].ring
    for q in imgs:
        if q.ring != target:
            raise RingMismatchError("images must live in one target ring")
    powers: list[dict[int, Polynomial]] = [{0: target.one(), 1: q} for q in imgs]

    def power(i: int, k: int) -> Polynomial:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k // 2) * power(i, k - k // 2)
        return cache[k]

    acc: dict = {}
    for e, c in p._terms.items():
        t = {target.zero_exps: c}
        for i, k in enumerate(e):
            if k:
                t = _mul_terms(t, power(i, k)._terms)
        for te, tc in t.items():
            s = acc.get(te, 0) + tc
            if s:
                acc[te] = s
            else:
                del acc[te]
    return Polynomial._raw(target, acc)


def divide_exact(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Multivariate division of f by a single g under degrevlex."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    gc, ge = leading_term(g, GLOBAL)
    rem = dict(f._terms)
    quo: dict = {}
    out_rem: dict = {}
    key = GLOBAL.key
    while rem:
        e = max(rem, key=key)
        c = rem[e]
        if all(a >= b for a, b in zip(e, ge)):
            m = tuple(a - b for a, b in zip(e, ge))
            q = c / gc
            quo[m] = quo.get(m, 0) + q
            for te, tc in g._terms.items():
                ne = tuple(a + b for a, b in zip(te, m))
                s = rem.get(ne, 0) - q * tc
                if s:
                    rem[ne] = s
                else:
                    rem.pop(ne, None)
        else:
            out_rem[e] = c
            del rem[e]
    return Polynomial(ring, quo), Polynomial._raw(ring, out_rem)


# -- text form -----------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(ring: PolyRing, exps: Exps) -> str:
    parts = []
    for v, k in zip(ring.variables, exps):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    if not p:
        return "0"
    chunks = []
    for i, (e, c) in enumerate(p._terms.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = format_monomial(p.ring, e)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if i == 0:
            chunks.append(("-" if sign == "-" else "") + body)
        else:
            chunks.append(f" {sign} {body}")
    return "".join(chunks)


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d*)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    """Recursive descent over the polynomial grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*       juxtaposition is multiplication
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := INT | VAR | '(' expr ')'
    """

    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text: str) -> list[tuple[str, object, int]]:
        toks = []
        pos = 0
        names = sorted(self.ring.variables, key=len, reverse=True)
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                break
            num, ident, sym = m.groups()
            start = m.start(m.lastindex)
            if num is not None:
                if "." in num:
                    toks.append(("dec", num, start))
                else:
                    toks.append(("num", int(num), start))
            elif ident is not None:
                toks.extend(self._split_ident(ident, start, names))
            else:
                if sym not in "+-*/^()":
                    raise PolyParseError(f"unexpected character {sym!r}", start)
                toks.append((sym, sym, start))
            pos = m.end()
        toks.append(("end", None, len(text)))
        return toks

    def _split_ident(self, ident: str, start: int, names: list[str]):
        # "2xy" style juxtaposition: greedily peel off known variable names
        if ident in self.ring._index:
            return [("var", ident, start)]
        out = []
        k = 0
        while k < len(ident):
            if ident[k].isdigit():
                j = k
                while j < len(ident) and ident[j].isdigit():
                    j += 1
                out.append(("num", int(ident[k:j]), start + k))
                k = j
                continue
            for v in names:
                if ident.startswith(v, k):
                    out.append(("var", v, start + k))
                    k += len(v)
                    break
            else:
                raise PolyParseError(f"unknown variable {ident!r}", start)
        return out

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise PolyParseError("empty expression", 0)
        p = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected token {self.text[pos:pos + 8]!r}", pos)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while True:
            kind, _, pos = self.peek()
            if kind == "*":
                self.take()
                p = p * self.unary()
            elif kind == "/":
                self.take()
                q = self.unary()
                if not q.is_constant():
                    raise PolyParseError("division only by a constant", pos)
                if not q:
                    raise PolyParseError("division by zero", pos)
                p = p / q.constant_coeff()
            elif kind in ("num", "dec", "var", "("):
                p = p * self.power()
            else:
                return p

    def unary(self) -> Polynomial:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind == "dec":
                raise PolyParseError(f"non-integer exponent {val}", pos)
            if kind != "num":
                raise PolyParseError("exponent must be a non-negative integer", pos)
            nxt = self.peek()
            if nxt[0] == "^":
                raise PolyParseError("chained exponents need parentheses", nxt[2])
            base = base ** val
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "dec":
            raise PolyParseError(f"decimal constant {val}; write rationals as a/b", pos)
        if kind == "var":
            return self.ring.gen(val)
        if kind == "(":
            p = self.expr()
            k2, _, p2 = self.take()
            if k2 != ")":
                raise PolyParseError("missing ')'", p2)
            return p
        if kind == "end":
            raise PolyParseError("unexpected end of expression", pos)
        raise PolyParseError(f"unexpected {val!r}", pos)


def parse_poly(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring``.

    >>> R = PolyRing("xyz")
    >>> str(parse_poly("(x+y)^2", R))
    'x^2 + 2*x*y + y^2'
    """
    return _Parser(text, ring).parse()
