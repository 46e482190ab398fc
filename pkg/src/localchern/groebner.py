"""Ideals, standard bases and the ideal-level toolkit.

Global computations use degrevlex and Buchberger's algorithm.  Local ones
(in the ring of germs at the origin) use negdegrevlex: bases come from
Lazard's homogenization, truncated at the highest corner once one is
visible, and reduction uses Mora's weak normal form.  Colength and dimension are read off leading ideals.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import _kernel
from .errors import CapExceeded
from .polyalg import (GLOBAL, INFINITY, LOCAL, MonomialOrder, Polynomial, PolyRing,
                      divide_exact)

MODES = ("local", "global")

# Term updates allowed in a Mora reduction before membership falls back to
# comparing leading ideals.
MORA_BUDGET = 20000

_DEGREE_CAP: ContextVar = ContextVar("degree_cap", default=None)


@contextmanager
def degree_cap(cap: int | None):
    """Apply an S-pair degree cap to every basis computed inside the block."""
    token = _DEGREE_CAP.set(cap)
    try:
        yield
    finally:
        _DEGREE_CAP.reset(token)


def _order_for(mode: str | MonomialOrder) -> MonomialOrder:
    if isinstance(mode, MonomialOrder):
        return mode
    if mode == "local":
        return LOCAL
    if mode == "global":
        return GLOBAL
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


class Ideal:
    """A finitely generated ideal of a polynomial ring."""

    __slots__ = ("ring", "gens")

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise ValueError(f"generator {g} is not in {ring}")
            if g and g not in gens:
                gens.append(g)
        self.ring = ring
        self.gens = tuple(gens)

    @classmethod
    def unit(cls, ring: PolyRing) -> Ideal:
        return cls(ring, [ring.one()])

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other: Ideal | Iterable[Polynomial]) -> Ideal:
        extra = other.gens if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, self.gens + tuple(extra))

    def __mul__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def __pow__(self, k: int) -> Ideal:
        out = Ideal.unit(self.ring)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gens == other.gens

    def __hash__(self):
        return hash((self.ring, self.gens))

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"

    def contains(self, p: Polynomial, mode: str = "global") -> bool:
        return membership(p, self, mode)

    def standard_basis(self, mode: str | MonomialOrder = "global") -> StandardBasis:
        return standard_basis(self, _order_for(mode))


@dataclass(frozen=True)
class StandardBasis:
    ideal: Ideal
    order: MonomialOrder
    basis: tuple
    local: bool
    _entries: tuple  # kernel triples (lm, ecart, dict)
    _homogeneous: tuple = ()  # Lazard basis behind a local result

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    def leading_monomials(self) -> list[tuple]:
        return [e[0] for e in self._entries]

    def is_unit(self) -> bool:
        zero = self.ring.zero_exps
        return any(e[0] == zero for e in self._entries)

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        return not normal_form(p, self)

    def as_ideal(self) -> Ideal:
        return Ideal(self.ring, self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


@lru_cache(maxsize=512)
def _cached_basis(ideal: Ideal, order: MonomialOrder, cap: int | None) -> StandardBasis:
    ctx = _kernel.Context(order)
    gens = [g._terms for g in ideal.gens]
    homogeneous: list = []
    if order.is_local:
        entries, homogeneous = _kernel.lazard_basis(ctx, gens, cap=cap)
    else:
        entries = _kernel.standard_basis(ctx, gens, cap=cap)
    basis = tuple(Polynomial._raw(ideal.ring, e[2]) for e in entries)
    return StandardBasis(ideal, order, basis, order.is_local, tuple(entries), tuple(homogeneous))


def standard_basis(I: Ideal, order: MonomialOrder | str = GLOBAL,
                   cap: int | None = None) -> StandardBasis:
    """Groebner basis (global order) or standard basis of the localization (local order).

    ``cap`` bounds the degree of the S-pair lcm's; exceeding it raises
    ``CapExceeded``.  No cap is applied by default.
    """
    if cap is None:
        cap = _DEGREE_CAP.get()
    return _cached_basis(I, _order_for(order), cap)


def groebner_basis(I: Ideal) -> StandardBasis:
    return standard_basis(I, GLOBAL)


def normal_form(p: Polynomial, B: StandardBasis) -> Polynomial:
    """Remainder of p modulo B.

    Global orders give the fully reduced remainder.  Under a local order the
    result is Mora's weak normal form: zero exactly when p lies in the
    localized ideal, otherwise with a leading term outside the leading ideal.
    """
    if p.ring != B.ring:
        raise ValueError("polynomial and basis live in different rings")
    ctx = _kernel.Context(B.order)
    if not B.local:
        r = _kernel.nf_global(ctx, p._terms, [(e[0], e[2]) for e in B._entries], full=True)
        return Polynomial._raw(B.ring, r)
    if B.is_unit() or not p:
        return B.ring.zero()
    try:
        r = _kernel.nf_mora(ctx, p._terms, list(B._entries), budget=MORA_BUDGET)
    except _kernel.BudgetExceeded:
        if _adds_nothing(B, p):
            return B.ring.zero()
        r = _kernel.nf_mora(ctx, p._terms, list(B._entries))
    return Polynomial._raw(B.ring, r)


def _adds_nothing(B: StandardBasis, p: Polynomial) -> bool:
    """Whether p lies in the ideal of B, by comparing leading ideals.

    B's ideal is contained in B's ideal plus (p), so the two coincide exactly
    when every leading monomial of the larger one is divisible by a leading
    monomial of B.
    """
    ctx = _kernel.Context(B.order)
    bigger, _ = _kernel.lazard_basis(ctx, [p._terms], homogeneous=list(B._homogeneous))
    leads = B.leading_monomials()
    return all(any(ctx.divides(a, e[0]) for a in leads) for e in bigger)


def membership(p: Polynomial, I: Ideal, mode: str = "global") -> bool:
    if not p:
        return True
    return standard_basis(I, _order_for(mode)).contains(p)


def spairs_reduce_to_zero(B: StandardBasis) -> bool:
    """Exhaustive S-pair check, used as a self-test of a computed basis."""
    ctx = _kernel.Context(B.order)
    return not any(normal_form(Polynomial._raw(B.ring, s), B)
                   for s in _kernel.spairs(ctx, list(B._entries)))


def count_standard_monomials(leads: Sequence[tuple], nvars: int) -> int | float:
    """Number of monomials outside the monomial ideal generated by ``leads``.

    Returns ``INFINITY`` unless every variable has a pure power among the
    generators.  Counting recurses on the first variable with memoization.
    """
    leads = [tuple(m) for m in leads]
    if any(not any(m) for m in leads):
        return 0
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in leads if m[i] and all(not a for j, a in enumerate(m) if j != i)]
        if not pure:
            return INFINITY
        bounds.append(min(pure))

    @lru_cache(maxsize=None)
    def count(gens: frozenset, depth: int) -> int:
        if any(not any(m) for m in gens):
            return 0
        if depth == nvars:
            return 1
        total = 0
        for e in range(bounds[depth]):
            sub = frozenset(m[1:] for m in gens if m[0] <= e)
            total += count(sub, depth + 1)
        return total

    return count(frozenset(leads), 0)


def colength(I: Ideal, mode: str = "local") -> int | float:
    """dim_Q of R/I (global) or of O_0/I (local, germs at the origin)."""
    B = standard_basis(I, _order_for(mode))
    return count_standard_monomials(B.leading_monomials(), I.ring.nvars)


def is_unit_at_origin(I: Ideal) -> bool:
    return standard_basis(I, LOCAL).is_unit()


def krull_dimension(I: Ideal, mode: str = "global") -> int:
    """Krull dimension of R/I from maximal independent variable sets.

    The unit ideal yields -1.  In local mode the dimension is that of the
    germ of V(I) at the origin.
    """
    B = standard_basis(I, _order_for(mode))
    leads = B.leading_monomials()
    n = I.ring.nvars
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in leads]
    if any(not s for s in supports):
        return -1
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1  # unreachable: the empty set is always independent here


def eliminate(I: Ideal, count: int) -> list[Polynomial]:
    """Generators of I intersected with the subring of the trailing variables.

    The first ``count`` variables of ``I.ring`` are eliminated.
    """
    order = MonomialOrder("elim", count)
    B = standard_basis(I, order)
    keep = []
    for e, p in zip(B._entries, B.basis):
        if not any(e[0][:count]):
            keep.append(p)
    return keep


def _lift(p: Polynomial, big: PolyRing, extra: int) -> Polynomial:
    pad = (0,) * extra
    return Polynomial._raw(big, {pad + e: c for e, c in p._terms.items()})


def _drop(p: Polynomial, small: PolyRing, extra: int) -> Polynomial:
    return Polynomial._raw(small, {e[extra:]: c for e, c in p._terms.items()})


def _fresh_name(ring: PolyRing) -> str:
    name = "_t"
    while name in ring.variables:
        name += "_"
    return name


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    """I intersected with J, via elimination of t from tI + (1-t)J."""
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring)
    big = ring.extend([_fresh_name(ring)])
    t = big.gen(0)
    gens = [t * _lift(f, big, 1) for f in I.gens]
    gens += [(1 - t) * _lift(g, big, 1) for g in J.gens]
    return Ideal(ring, [_drop(p, ring, 1) for p in eliminate(Ideal(big, gens), 1)])


def ideal_quotient(I: Ideal, g: Polynomial | Ideal) -> Ideal:
    """(I : g) for a polynomial, or (I : J) for an ideal J."""
    if isinstance(g, Ideal):
        if g.is_zero():
            return Ideal.unit(I.ring)
        out = None
        for h in g.gens:
            q = ideal_quotient(I, h)
            out = q if out is None else ideal_intersection(out, q)
        return out
    if not g:
        raise ValueError("quotient by the zero polynomial")
    if g.is_constant():
        return I
    meet = ideal_intersection(I, Ideal(I.ring, [g]))
    quo = []
    for p in meet.gens:
        q, r = divide_exact(p, g)
        if r:
            raise ArithmeticError("intersection element not divisible by g")
        quo.append(q)
    return reduced_ideal(Ideal(I.ring, quo))


def reduced_ideal(I: Ideal) -> Ideal:
    """Same ideal, generated by its reduced Groebner basis."""
    if I.is_zero():
        return I
    return groebner_basis(I).as_ideal()


def ideal_contains(big: Ideal, small: Ideal, mode: str = "global") -> bool:
    B = standard_basis(big, _order_for(mode))
    return all(B.contains(g) for g in small.gens)


def ideals_equal(I: Ideal, J: Ideal, mode: str = "global") -> bool:
    return ideal_contains(I, J, mode) and ideal_contains(J, I, mode)


def saturate(I: Ideal, J: Ideal, max_steps: int | None = None) -> Ideal:
    """(I : J^infinity) by repeated quotients until the chain stabilizes.

    Stabilization is tested by full ideal containment, not by comparing
    leading ideals.
    """
    if J.is_zero():
        raise ValueError("saturation by the zero ideal")
    if groebner_basis(J).is_unit():
        return I
    current = reduced_ideal(I)
    steps = 0
    while True:
        nxt = ideal_quotient(current, J)
        steps += 1
        if ideal_contains(current, nxt):
            return current
        current = nxt
        if max_steps is not None and steps >= max_steps:
            raise CapExceeded(f"saturation did not stabilize in {max_steps} steps")
