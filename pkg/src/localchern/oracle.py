"""Brute-force cross-checks that share no code path with the basis engines.

``colength_truncation`` counts dim O/(M + m^N) by plain linear algebra on
monomial coordinates.  ``imult_resultant`` gets intersection multiplicities
of plane curves from the order of vanishing of a resultant after a random
shear, using sympy for the resultant and gcd.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
import sympy

from .errors import HypothesisViolation, RouteDisagreement
from .groebner import Ideal
from .matmod import ModulePresentation
from .polyalg import Polynomial

DEFAULT_CAP = 40


@dataclass(frozen=True)
class TruncationResult:
    value: int | None
    stabilized_at: int | None
    cap: int
    history: tuple = ()

    @property
    def stabilized(self) -> bool:
        return self.value is not None


def _monomials_below(nvars: int, degree: int) -> list[tuple]:
    """All exponent tuples of total degree < ``degree``."""
    out = []
    for d in range(degree):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _rank(rows: list[dict]) -> int:
    """Rank over Q of sparse rows (column -> Fraction)."""
    pivots: dict = {}
    for row in rows:
        r = dict(row)
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / r[col]
                pivots[col] = {k: v * inv for k, v in r.items()}
                break
            c = r[col]
            for k, v in piv.items():
                nv = r.get(k, 0) - c * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return len(pivots)


def _truncated_dimension(vectors: list[dict], nvars: int, rank: int, N: int) -> int:
    """dim of F/(M + m^N F) where F = O^rank and M is spanned by ``vectors``."""
    monos = _monomials_below(nvars, N)
    width = len(monos)
    index = {(c, m): c * width + k for c in range(rank) for k, m in enumerate(monos)}
    rows = []
    for v in vectors:
        low = min(sum(key[1:]) for key in v)
        for a in monos:
            if sum(a) + low >= N:
                continue
            row = {}
            for key, coeff in v.items():
                e = tuple(x + y for x, y in zip(a, key[1:]))
                if sum(e) < N:
                    row[index[(key[0], e)]] = coeff
            if row:
                rows.append(row)
    return rank * len(monos) - _rank(rows)


def colength_truncation(obj: Ideal | ModulePresentation, cap: int = DEFAULT_CAP) -> TruncationResult:
    """Local colength via dim O/(I + m^N), N = 2, 3, ..., cap.

    The value is accepted once two consecutive truncation degrees give the
    same dimension (by Nakayama the sequence is then constant).  Reaching
    ``cap`` first returns a result whose ``value`` is None.
    """
    if cap < 2:
        raise ValueError("cap must be at least 2")
    if isinstance(obj, Ideal):
        obj = ModulePresentation.quotient_ring(obj)
    vectors = obj.column_vectors()
    nvars = obj.ring.nvars
    prev = None
    history = []
    for N in range(2, cap + 1):
        dim = _truncated_dimension(vectors, nvars, obj.rank, N)
        history.append(dim)
        if prev is not None and dim == prev:
            return TruncationResult(dim, N - 1, cap, tuple(history))
        prev = dim
    return TruncationResult(None, None, cap, tuple(history))


def _to_sympy(p: Polynomial, syms) -> sympy.Expr:
    expr = sympy.Integer(0)
    for e, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                term *= s ** k
        expr += term
    return expr


def _imult_once(f: sympy.Poly, g: sympy.Poly, u, v, shear: int) -> int:
    fs = sympy.Poly(f.as_expr().subs(u, u + shear * v), u, v)
    gs = sympy.Poly(g.as_expr().subs(u, u + shear * v), u, v)
    for p in (fs, gs):
        lead = sympy.Poly(p.as_expr(), v).LC()
        if sympy.Poly(lead, u).degree() > 0:
            raise ValueError("shear left a non-constant leading coefficient")
    res = sympy.Poly(sympy.resultant(fs.as_expr(), gs.as_expr(), v), u)
    if res.is_zero:
        raise HypothesisViolation("resultant vanishes identically: common component")
    coeffs = res.all_coeffs()[::-1]
    return next(k for k, c in enumerate(coeffs) if c != 0)


def imult_resultant(f: Polynomial, g: Polynomial, seed: int = 0, bound: int = 50) -> int:
    """Intersection multiplicity at the origin of two plane curves.

    A seeded shear u -> u + c v puts every other intersection point off the
    line u = 0; the order of vanishing of Res_v(f, g) at u = 0 is then the
    local multiplicity.  Two independent shears must agree.
    """
    ring = f.ring
    if ring.nvars != 2 or g.ring != ring:
        raise ValueError("imult_resultant needs two polynomials in a 2-variable ring")
    u, v = sympy.symbols("u v")
    F = sympy.Poly(_to_sympy(f, (u, v)), u, v, domain="QQ")
    G = sympy.Poly(_to_sympy(g, (u, v)), u, v, domain="QQ")
    if F.is_zero or G.is_zero:
        raise HypothesisViolation("zero curve: multiplicity is infinite")
    if F.eval({u: 0, v: 0}) != 0 or G.eval({u: 0, v: 0}) != 0:
        return 0
    h = sympy.gcd(F, G)
    if h.total_degree() > 0:
        if h.eval({u: 0, v: 0}) == 0:
            raise HypothesisViolation("common component through the origin")
        F = sympy.div(F, h)[0]
        G = sympy.div(G, h)[0]
    rng = np.random.default_rng(seed)
    values = []
    shears: set = set()
    attempts = 0
    while len(values) < 2:
        attempts += 1
        if attempts > 50:
            raise RouteDisagreement("could not find admissible shears")
        c = int(rng.integers(-bound, bound, endpoint=True))
        if c == 0 or c in shears:
            continue
        shears.add(c)
        try:
            values.append(_imult_once(F, G, u, v, c))
        except ValueError:
            continue
    if values[0] != values[1]:
        raise RouteDisagreement(f"shears disagree: {values}")
    return values[0]
