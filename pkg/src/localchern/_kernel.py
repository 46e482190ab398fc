"""Raw standard-basis machinery on dict polynomials.

Polynomials here are plain ``dict`` objects mapping a monomial tuple to a
nonzero ``Fraction``.  For ideals the monomial is the exponent tuple; for
free-module elements it is ``(component, *exponents)``.  Everything in this
module is internal: callers go through ``groebner`` and ``matmod``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import CapExceeded
from .polyalg import MonomialOrder


class Context:
    """Order and monomial helpers for one computation."""

    def __init__(self, order: MonomialOrder, module: bool = False):
        self.order = order
        self.local = order.is_local
        self.module = module
        self.off = 1 if module else 0
        if module:
            self.key = lru_cache(maxsize=None)(lambda m: (-m[0], order.key(m[1:])))
        else:
            self.key = lru_cache(maxsize=None)(order.key)

    def deg(self, m: tuple) -> int:
        return sum(m[self.off:]) if self.off else sum(m)

    def divides(self, a: tuple, b: tuple) -> bool:
        if self.off and a[0] != b[0]:
            return False
        for x, y in zip(a, b):
            if x > y:
                return False
        return True

    def quotient(self, b: tuple, a: tuple) -> tuple:
        """Exponent shift m with m * a = b (component dropped)."""
        o = self.off
        return tuple(y - x for x, y in zip(a[o:], b[o:]))

    def lcm(self, a: tuple, b: tuple):
        if self.off:
            if a[0] != b[0]:
                return None
            return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))
        return tuple(max(x, y) for x, y in zip(a, b))

    def coprime(self, a: tuple, b: tuple) -> bool:
        if self.off:
            return False  # the product criterion is an ideal-only fact
        return all(not (x and y) for x, y in zip(a, b))

    def shift(self, m: tuple, s: tuple) -> tuple:
        o = self.off
        return m[:o] + tuple(x + y for x, y in zip(m[o:], s))

    def lead(self, p: dict) -> tuple:
        return max(p, key=self.key)

    def poly_deg(self, p: dict) -> int:
        return max(self.deg(m) for m in p)

    def ecart(self, p: dict, lm: tuple | None = None) -> int:
        if lm is None:
            lm = self.lead(p)
        return self.poly_deg(p) - self.deg(lm)


def add_scaled(ctx: Context, h: dict, c: Fraction, s: tuple, g: dict) -> None:
    """In place: h -= c * x^s * g."""
    shift = ctx.shift
    for m, gc in g.items():
        nm = shift(m, s)
        v = h.get(nm, 0) - c * gc
        if v:
            h[nm] = v
        else:
            h.pop(nm, None)


def monic(ctx: Context, p: dict) -> dict:
    c = p[ctx.lead(p)]
    if c == 1:
        return p
    inv = 1 / c
    return {m: v * inv for m, v in p.items()}


def spoly(ctx: Context, f: dict, lf: tuple, g: dict, lg: tuple) -> dict:
    l = ctx.lcm(lf, lg)
    sf = ctx.quotient(l, lf)
    sg = ctx.quotient(l, lg)
    h: dict = {}
    cf, cg = f[lf], g[lg]
    add_scaled(ctx, h, -1 / cf, sf, f)
    add_scaled(ctx, h, 1 / cg, sg, g)
    return h


def nf_global(ctx: Context, f: dict, basis: list, full: bool = True) -> dict:
    """Division remainder of f by basis entries ``(lm, poly)``; global orders only."""
    h = dict(f)
    rem: dict = {}
    key = ctx.key
    while h:
        m = max(h, key=key)
        c = h[m]
        for lg, g in basis:
            if ctx.divides(lg, m):
                add_scaled(ctx, h, c / g[lg], ctx.quotient(m, lg), g)
                break
        else:
            if not full:
                h.update(rem)
                return h
            rem[m] = c
            del h[m]
    return rem


class BudgetExceeded(Exception):
    """Raised by ``nf_mora`` when a step budget runs out."""


def nf_mora(ctx: Context, f: dict, basis: list, budget: int | None = None) -> dict:
    """Mora's weak normal form: the result is 0 or has an irreducible lead.

    ``basis`` holds ``(lm, ecart, poly)`` triples.  Intermediate remainders
    of small ecart join the reducer set, which is what makes the reduction
    terminate under a local order.  Termination can still take very many
    steps, so callers may pass a ``budget`` on the number of term updates.
    """
    h = dict(f)
    if not h:
        return h
    T = list(basis)
    work = 0
    while h:
        if budget is not None and work > budget:
            raise BudgetExceeded(work)
        work += len(h)
        lh = ctx.lead(h)
        best = None
        for entry in T:
            if ctx.divides(entry[0], lh) and (best is None or entry[1] < best[1]):
                best = entry
                if best[1] == 0:
                    break
        if best is None:
            return h
        eh = ctx.ecart(h, lh)
        if best[1] > eh:
            T.append((lh, eh, dict(h)))
        lg, _, g = best
        add_scaled(ctx, h, h[lh] / g[lg], ctx.quotient(lh, lg), g)
    return h


def reduce(ctx: Context, f: dict, entries: list) -> dict:
    """Normal form dispatch; ``entries`` are ``(lm, ecart, poly)``."""
    if ctx.local:
        return nf_mora(ctx, f, entries)
    return nf_global(ctx, f, [(e[0], e[2]) for e in entries], full=False)


class _LazardOrder:
    """Order on (h, x): total degree first, ties broken by the local order on x.

    It is a global degree order, so Buchberger terminates on homogenized
    input, and dehomogenizing the result gives a local standard basis.
    """

    is_local = False

    def __init__(self, local: MonomialOrder):
        self.local = local

    def key(self, exps: tuple) -> tuple:
        return (sum(exps), self.local.key(exps[1:]))


class _Corner:
    """Highest-corner bookkeeping for a homogenized local computation.

    For an ideal, once the leads contain a pure power x_i^a_i of every
    variable, every monomial of x-degree >= sum(a_i - 1) + 1 lies in the
    local ideal, so such terms can be dropped.  Under the Lazard order the
    lead of a homogeneous element has the smallest x-degree among its
    terms, so a pair whose lcm is past the corner reduces to zero.

    For modules a lead x^a e_c only rewrites x^a e_c into later
    components, so the corner is taken from a length bound instead: when
    every occurring component has pure powers, the quotient has length at
    most the sum over components of prod(a_i), and that power of the
    maximal ideal kills it.  Pairs are never skipped in the module case.
    """

    def __init__(self, ctx: Context, comps: set):
        self.off = ctx.off + 1  # skip component and homogenizing variable
        self.comps = comps
        self.powers: dict = {}  # component -> {variable: exponent}
        self.bound: int | None = None

    def note(self, lead: tuple) -> None:
        x = lead[self.off:]
        hits = [i for i, v in enumerate(x) if v]
        if len(hits) != 1:
            return
        found = self.powers.setdefault(lead[0] if self.off == 2 else 0, {})
        i = hits[0]
        if x[i] >= found.get(i, x[i] + 1):
            return
        found[i] = x[i]
        full = [p for p in self.powers.values() if len(p) == len(x)]
        if self.off == 1:
            if full:
                self.bound = sum(a - 1 for a in full[0].values()) + 1
        elif len(full) == len(self.comps):
            total = 0
            for p in full:
                prod = 1
                for a in p.values():
                    prod *= a
                total += prod
            self.bound = total

    def dead_pair(self, lcm: tuple) -> bool:
        return self.off == 1 and self.dead(lcm)

    def dead(self, m: tuple) -> bool:
        return self.bound is not None and sum(m[self.off:]) >= self.bound

    def trim(self, p: dict) -> dict:
        if self.bound is None:
            return p
        return {m: c for m, c in p.items() if sum(m[self.off:]) < self.bound}


def _homogenize(ctx: Context, p: dict) -> dict:
    o = ctx.off
    d = ctx.poly_deg(p)
    return {m[:o] + (d - ctx.deg(m),) + m[o:]: c for m, c in p.items()}


def _dehomogenize(ctx: Context, p: dict) -> dict:
    o = ctx.off
    out: dict = {}
    for m, c in p.items():
        k = m[:o] + m[o + 1:]
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def standard_basis(ctx: Context, gens: list, cap: int | None = None) -> list:
    """Minimal standard basis as ``(lm, ecart, poly)`` triples, monic leads.

    Global orders run Buchberger directly and interreduce.  Local orders go
    through ``lazard_basis``.
    """
    gens = [dict(g) for g in gens if g]
    if ctx.local:
        return lazard_basis(ctx, gens, cap)[0]
    return _finish(ctx, interreduce(ctx, _minimal(ctx, _buchberger(ctx, gens, cap))))


def lazard_basis(ctx: Context, gens: list, cap: int | None = None,
                 homogeneous: list = ()) -> tuple[list, list]:
    """Local standard basis by Lazard's method.

    Homogenize, run Buchberger under a degree order that breaks ties
    locally, then set the homogenizing variable to 1.  Mora's tangent cone
    loop computes the same leading ideal, but its intermediate remainders
    can grow for a very long time on sparse inputs, while the homogenized
    computation proceeds degree by degree.  Any homogeneous ideal that
    dehomogenizes to the target ideal works, so a previously returned
    ``homogeneous`` basis can seed the computation.  Returns the minimal
    local basis and the homogeneous Groebner basis it came from.
    """
    hctx = Context(_LazardOrder(ctx.order), module=ctx.module)
    seeds = list(homogeneous) + [_homogenize(ctx, g) for g in gens if g]
    comps = {m[0] for g in seeds for m in g} if ctx.module else {0}
    raw = _buchberger(hctx, seeds, cap, corner=_Corner(ctx, comps))
    result = []
    for _, _, p in raw:
        q = monic(ctx, _dehomogenize(ctx, p))
        lq = ctx.lead(q)
        result.append((lq, ctx.ecart(q, lq), q))
    return _finish(ctx, _minimal(ctx, result)), [e[2] for e in raw]


def _minimal(ctx: Context, entries: list) -> list:
    """Drop entries whose lead is divisible by another lead."""
    out = []
    for idx, e in enumerate(entries):
        if any(ctx.divides(o[0], e[0]) and (o[0] != e[0] or jdx < idx)
               for jdx, o in enumerate(entries) if jdx != idx):
            continue
        out.append(e)
    return out


def _finish(ctx: Context, entries: list) -> list:
    return sorted(entries, key=lambda e: ctx.key(e[0]))


def _buchberger(ctx: Context, gens: list, cap: int | None, corner: _Corner | None = None) -> list:
    """Buchberger with Gebauer-Moeller pair pruning under a global order.

    The pair queue is ordered by sugar degree, then by the lcm under the
    term order, then by insertion index, so the output is deterministic.
    A ``corner`` (Lazard runs only) truncates terms past the highest corner.
    """
    polys: list = []   # (lm, ecart, poly, sugar)
    active: list = []  # indices into polys
    pairs: dict = {}   # (i, j) -> (sugar, lcm)

    def entries():
        return [polys[i][:3] for i in active]

    def insert(h: dict, sugar: int) -> None:
        h = monic(ctx, h)
        lh = ctx.lead(h)
        if corner is not None:
            corner.note(lh)
        k = len(polys)
        polys.append((lh, ctx.ecart(h, lh), h, sugar))
        # Gebauer-Moeller update
        cand = []
        for i in active:
            l = ctx.lcm(polys[i][0], lh)
            if l is not None:
                cand.append((i, l))
        keep = []
        while cand:
            i, l = cand.pop(0)
            if (ctx.coprime(polys[i][0], lh)
                    or not any(ctx.divides(l2, l) for _, l2 in cand)
                    and not any(ctx.divides(l2, l) for _, l2 in keep)):
                keep.append((i, l))
        for (i, j), (_, l) in list(pairs.items()):
            if (ctx.divides(lh, l) and ctx.lcm(polys[i][0], lh) != l
                    and ctx.lcm(polys[j][0], lh) != l):
                del pairs[(i, j)]
        for i, l in keep:
            if ctx.coprime(polys[i][0], lh):
                continue
            if corner is not None and corner.dead_pair(l):
                continue
            li = polys[i][0]
            s = max(polys[i][3] + ctx.deg(l) - ctx.deg(li), sugar + ctx.deg(l) - ctx.deg(lh))
            pairs[(i, k)] = (s, l)
        active[:] = [i for i in active if not ctx.divides(lh, polys[i][0])]
        active.append(k)

    ordered = sorted(gens, key=lambda p: ctx.key(ctx.lead(p)))
    for g in ordered:
        h = reduce(ctx, g, entries())
        if h:
            insert(h, ctx.poly_deg(g))

    key = ctx.key
    while pairs:
        (i, j) = min(pairs, key=lambda ij: (pairs[ij][0], key(pairs[ij][1]), ij))
        sugar, l = pairs.pop((i, j))
        if cap is not None and ctx.deg(l) > cap:
            raise CapExceeded(f"pair degree {ctx.deg(l)} exceeds cap {cap}")
        if corner is not None and corner.dead_pair(l):
            continue
        fi, fj = polys[i], polys[j]
        s = spoly(ctx, fi[2], fi[0], fj[2], fj[0])
        if corner is not None:
            s = corner.trim(s)
        if not s:
            continue
        h = reduce(ctx, s, entries())
        if corner is not None:
            h = corner.trim(h)
        if h:
            insert(h, sugar)

    return [polys[i][:3] for i in active]


def interreduce(ctx: Context, entries: list) -> list:
    out = []
    for idx, (lm, _, p) in enumerate(entries):
        others = [(o[0], o[2]) for jdx, o in enumerate(entries) if jdx != idx]
        tail = dict(p)
        c = tail.pop(lm)
        r = nf_global(ctx, tail, others, full=True)
        r[lm] = c
        r = monic(ctx, r)
        out.append((lm, ctx.ecart(r, lm), r))
    return out


def spairs(ctx: Context, entries: list):
    """Yield the S-polynomials of all pairs with a common component."""
    for a in range(len(entries)):
        for b in range(a + 1, len(entries)):
            la, lb = entries[a][0], entries[b][0]
            if ctx.lcm(la, lb) is None:
                continue
            s = spoly(ctx, entries[a][2], la, entries[b][2], lb)
            if s:
                yield s


def spairs_reduce_to_zero(ctx: Context, entries: list) -> bool:
    return not any(reduce(ctx, s, entries) for s in spairs(ctx, entries))
