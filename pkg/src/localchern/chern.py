"""Special loci, polar curves and local Chern obstructions of 1-form collections.

Two closed-form regimes are supported, each reducing every term to a local
colength:

* ICIS: the obstruction is ind(omega) - ind(l) where ind is the colength of
  I(X) plus the maximal minors of the augmented Jacobian matrices and l is
  a generic linear collection of the same shape.
* surfaces in C^3 with partition (1, 1): the obstruction is the intersection
  number of the two polar curves minus the same number for generic pairs,
  computed in C^3 ("colength" route) or on a user-supplied normalization
  ("normalization" route).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (DegeneratePair, HypothesisViolation, InfiniteColength, RetryExhausted,
                     RouteDisagreement)
from .groebner import (Ideal, colength, is_unit_at_origin, krull_dimension, membership,
                       saturate, standard_basis)
from .matmod import PolyMatrix, jacobian_matrix
from .polyalg import GLOBAL, INFINITY, Polynomial, PolyRing, format_monomial, substitute

log = logging.getLogger(__name__)

ROUTES = ("colength", "normalization", "both")
DEFAULT_BOUND = 10
DEFAULT_TRIALS = 3

Covector = tuple  # tuple[Polynomial, ...] of length n


@dataclass(frozen=True)
class Normalization:
    """A finite map from a smooth source onto X, given by n image polynomials."""

    source: PolyRing
    images: tuple

    def pullback(self, p: Polynomial) -> Polynomial:
        return substitute(p, list(self.images), self.source)

    def pullback_ideal(self, I: Ideal) -> Ideal:
        return Ideal(self.source, [self.pullback(g) for g in I.gens])


@dataclass(frozen=True)
class VarietyInput:
    ring: PolyRing
    equations: tuple
    dim: int
    normalization: Normalization | None = None
    singular_override: Ideal | None = None

    def __post_init__(self):
        n = self.ring.nvars
        object.__setattr__(self, "equations", tuple(e for e in self.equations if e))
        if not 1 <= self.dim <= n:
            raise ValueError(f"dimension {self.dim} must lie in [1, {n}]")
        if self.dim < n and not self.equations:
            raise ValueError("a proper subvariety needs defining equations")
        for e in self.equations:
            if e.ring != self.ring:
                raise ValueError(f"equation {e} is not in {self.ring}")
        if self.normalization is not None:
            nz = self.normalization
            if len(nz.images) != n:
                raise ValueError(f"normalization has {len(nz.images)} images, ring has {n} variables")
            if nz.source.nvars != self.dim:
                raise ValueError(f"normalization source has {nz.source.nvars} variables, expected {self.dim}")

    @property
    def n(self) -> int:
        return self.ring.nvars

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.equations)

    def is_complete_intersection(self) -> bool:
        return len(self.equations) == self.n - self.dim


@dataclass(frozen=True)
class FormCollection:
    """Sub-collections omega^(1..s); sub-collection i holds d - k_i + 1 covectors."""

    partition: tuple
    forms: tuple

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(int(k) for k in self.partition))
        object.__setattr__(self, "forms", tuple(tuple(tuple(w) for w in sub) for sub in self.forms))
        if len(self.partition) != len(self.forms):
            raise ValueError("partition and sub-collection counts differ")
        if any(k < 1 for k in self.partition):
            raise ValueError("partition entries must be positive")

    @classmethod
    def parse(cls, ring: PolyRing, partition: Sequence[int],
              forms: Sequence[Sequence[Sequence[str]]]) -> FormCollection:
        return cls(tuple(partition),
                   tuple(tuple(tuple(ring.parse(t) for t in w) for w in sub) for sub in forms))

    @property
    def s(self) -> int:
        return len(self.partition)

    def validate(self, X: VarietyInput) -> None:
        if sum(self.partition) != X.dim:
            raise ValueError(f"partition {self.partition} sums to {sum(self.partition)}, "
                             f"expected d = {X.dim}")
        for i, (k, sub) in enumerate(zip(self.partition, self.forms), 1):
            want = X.dim - k + 1
            if len(sub) != want:
                raise ValueError(f"sub-collection {i} has {len(sub)} forms, expected d-k_i+1 = {want}")
            for w in sub:
                if len(w) != X.n:
                    raise ValueError(f"form of length {len(w)} in sub-collection {i}, expected {X.n}")
                for p in w:
                    if p.ring != X.ring:
                        raise ValueError(f"form entry {p} is not in {X.ring}")


def differential(f: Polynomial) -> Covector:
    return tuple(f.diff(i) for i in range(f.ring.nvars))


@dataclass
class GeometryReport:
    prefix_dims: list
    expected_dims: list
    isolated: bool
    singular_dim: int
    raw_dims: list = field(default_factory=list)
    inside_singular: list = field(default_factory=list)

    @property
    def expected_ok(self) -> list:
        return [d <= e for d, e in zip(self.prefix_dims, self.expected_dims)]

    def to_dict(self) -> dict:
        return {"prefix_dims": list(self.prefix_dims),
                "expected_dims": list(self.expected_dims),
                "isolated": self.isolated}


@dataclass
class Term:
    label: str
    value: int | float
    seed: int | None = None

    def to_dict(self) -> dict:
        v = self.value if self.value != INFINITY else "inf"
        return {"label": self.label, "value": v, "seed": self.seed}


@dataclass
class ChernReport:
    method: str
    terms: list
    geometry: GeometryReport | None
    final: int
    seeds: list
    warnings: list = field(default_factory=list)
    trials_agree: bool = True

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "terms": [t.to_dict() for t in self.terms],
            "geometry": self.geometry.to_dict() if self.geometry else None,
            "final": self.final,
            "seeds": list(self.seeds),
            "warnings": list(self.warnings),
        }


# -- loci -----------------------------------------------------------------

def augmented_matrix(X: VarietyInput, forms: Sequence[Covector]) -> PolyMatrix:
    """D(F, omega): the Jacobian rows of X followed by the covectors."""
    rows = []
    if X.equations:
        rows.extend(jacobian_matrix(list(X.equations)).entries)
    rows.extend(tuple(w) for w in forms)
    return PolyMatrix(X.ring, rows)


def _rank_drop_minors(X: VarietyInput, forms: Sequence[Covector], k: int) -> list[Polynomial]:
    # n - k + 1 is the maximal-minor size for a complete intersection; with
    # extra equations it is the size whose vanishing means a rank drop.
    A = augmented_matrix(X, forms)
    size = X.n - k + 1
    if size > min(A.shape):
        return []
    return A.minors(size)


def singular_locus_ideal(X: VarietyInput) -> Ideal:
    """I(X) plus the (n - d)-minors of the Jacobian (or the stored override)."""
    if X.singular_override is not None:
        return X.singular_override
    codim = X.n - X.dim
    if codim == 0:
        return Ideal.unit(X.ring)
    J = jacobian_matrix(list(X.equations))
    if codim > min(J.shape):
        return X.ideal
    return X.ideal + J.minors(codim)


def special_locus_ideal(X: VarietyInput, C: FormCollection, prefix: int | None = None) -> Ideal:
    """I(X) plus the maximal minors of D(F, omega^(i)) for i <= prefix."""
    s = C.s
    prefix = s if prefix is None else prefix
    if not 1 <= prefix <= s:
        raise ValueError(f"prefix {prefix} outside 1..{s}")
    I = X.ideal
    for k, sub in zip(C.partition[:prefix], C.forms[:prefix]):
        I = I + _rank_drop_minors(X, sub, k)
    return I


def geometry_checks(X: VarietyInput, C: FormCollection) -> GeometryReport:
    """Dimensions of the special loci at the origin, prefix by prefix.

    ``prefix_dims`` are germ dimensions of each locus with the components
    inside the singular set S(X) saturated away; ``raw_dims`` keep them.
    ``inside_singular[i]`` is True when the whole prefix locus lies in S(X).
    """
    sing = singular_locus_ideal(X)
    sing_dim = krull_dimension(sing, "local")
    smooth = sing_dim < 0
    report = GeometryReport([], [], False, sing_dim)
    acc = 0
    for i in range(1, C.s + 1):
        acc += C.partition[i - 1]
        L = special_locus_ideal(X, C, i)
        raw = krull_dimension(L, "local")
        if smooth or raw < 0:
            sat_dim, inside = raw, False
        elif raw == 0:
            # a point germ at a singular origin saturates away completely
            sat_dim, inside = -1, True
        else:
            S = saturate(L, sing)
            sat_dim = krull_dimension(S, "local")
            inside = raw >= 0 and sat_dim < 0
        report.raw_dims.append(raw)
        report.prefix_dims.append(sat_dim)
        report.expected_dims.append(X.dim - acc)
        report.inside_singular.append(inside)
    report.isolated = report.prefix_dims[-1] <= 0
    return report


def ind_point(X: VarietyInput, C: FormCollection) -> int | float:
    """Colength at the origin of I(X) plus all augmented maximal minors."""
    return colength(special_locus_ideal(X, C), "local")


# -- generic collections --------------------------------------------------

def _rank(rows: list) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def generic_linear_collection(ring: PolyRing, partition: Sequence[int], dim: int, seed: int,
                              bound: int = DEFAULT_BOUND, retries: int = 100) -> FormCollection:
    """Constant covectors with integer entries uniform in [-bound, bound].

    Draws come from numpy's PCG64 generator seeded with ``seed``, so the same
    (shape, seed, bound) always gives the same collection.  Each
    sub-collection is redrawn until its covectors are linearly independent.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    n = ring.nvars
    rng = np.random.Generator(np.random.PCG64(seed))
    subs = []
    for k in partition:
        count = dim - k + 1
        if count > n or count < 1:
            raise ValueError(f"impossible shape: {count} independent covectors in {n} variables")
        for _ in range(retries):
            rows = rng.integers(-bound, bound, size=(count, n), endpoint=True).tolist()
            if _rank(rows) == count:
                break
        else:
            raise RetryExhausted(f"no independent draw in {retries} tries (bound {bound})")
        subs.append(tuple(tuple(ring.const(int(a)) for a in r) for r in rows))
    return FormCollection(tuple(partition), tuple(subs))


def _trial_seeds(seed: int, trials: int) -> list[int]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return [seed + i for i in range(trials)]


# -- ICIS regime ----------------------------------------------------------

def _require_isolated(geo: GeometryReport) -> None:
    if not geo.isolated:
        raise HypothesisViolation(
            f"special locus is not isolated: dimension {geo.prefix_dims[-1]} at the origin "
            f"(prefix dims {geo.prefix_dims})")


def chern_icis(X: VarietyInput, C: FormCollection, seed: int = 0,
               trials: int = DEFAULT_TRIALS, bound: int = DEFAULT_BOUND) -> tuple[int, ChernReport]:
    """ind(omega) - min over seeded generic collections of ind(l)."""
    C.validate(X)
    if not X.is_complete_intersection():
        raise HypothesisViolation(
            f"icis method needs n - d = {X.n - X.dim} equations, got {len(X.equations)}")
    geo = geometry_checks(X, C)
    _require_isolated(geo)
    main = ind_point(X, C)
    if main == INFINITY:
        raise InfiniteColength("ind(omega) is infinite")
    seeds = _trial_seeds(seed, trials)
    terms = [Term("ind(omega)", main)]
    values = []
    for s in seeds:
        L = generic_linear_collection(X.ring, C.partition, X.dim, s, bound)
        v = ind_point(X, L)
        if v == INFINITY:
            raise InfiniteColength(f"generic collection (seed {s}) has infinite index")
        values.append(v)
        terms.append(Term("ind(l)", v, s))
    warnings = []
    agree = len(set(values)) == 1
    if not agree:
        warnings.append(f"generic trials disagree: {values}; using the minimum")
    final = main - min(values)
    report = ChernReport("icis", terms, geo, final, seeds, warnings, agree)
    return final, report


# -- surface regime -------------------------------------------------------

def _check_surface(X: VarietyInput, C: FormCollection) -> None:
    C.validate(X)
    if X.n != 3 or X.dim != 2 or len(X.equations) != 1:
        raise HypothesisViolation("surface method needs a hypersurface X^2 in C^3")
    if C.partition != (1, 1):
        raise HypothesisViolation(f"surface method needs partition (1, 1), got {C.partition}")


def pair_determinant(X: VarietyInput, pair: Sequence[Covector]) -> Polynomial:
    return augmented_matrix(X, pair).determinant()


def polar_curve_ideal(X: VarietyInput, pair: Sequence[Covector]) -> Ideal:
    """(f, det D(f, pair)) with the components inside S(X) saturated away."""
    if X.n != 3 or X.dim != 2 or len(X.equations) != 1:
        raise HypothesisViolation("polar curves are computed for hypersurface surfaces in C^3")
    if len(pair) != 2:
        raise ValueError(f"a polar pair has 2 forms, got {len(pair)}")
    det = pair_determinant(X, pair)
    if membership(det, X.ideal):
        raise DegeneratePair("the pair's determinant vanishes identically on X")
    I = X.ideal + [det]
    sing = singular_locus_ideal(X)
    if standard_basis(sing, GLOBAL).is_unit():
        return I
    return saturate(I, sing)


def repeated_monomial_factors(I: Ideal) -> list[str]:
    """Squared monomial factors of the generators (a cheap non-reducedness flag)."""
    found = []
    for g in I.gens:
        content = [min(e[i] for e, _ in g.items()) for i in range(g.ring.nvars)]
        if any(c >= 2 for c in content):
            found.append(format_monomial(g.ring, tuple(content)))
    return found


def _polar_term(X: VarietyInput, Pa: Ideal, Pb: Ideal, route: str) -> int | float:
    if is_unit_at_origin(Pa) or is_unit_at_origin(Pb):
        return 0
    if route == "colength":
        return colength(Pa + Pb, "local")
    nz = X.normalization
    return colength(nz.pullback_ideal(Pa) + nz.pullback_ideal(Pb), "local")


def chern_surface(X: VarietyInput, C: FormCollection, seed: int = 0,
                  trials: int = DEFAULT_TRIALS, route: str = "colength",
                  bound: int = DEFAULT_BOUND) -> tuple[int, ChernReport]:
    """Gamma(w1).Gamma(w2) - Gamma(~w1).Gamma(~w2) for a surface in C^3.

    ``route`` picks where the intersection number is computed: as a
    colength in C^3, on the normalization of X, or both (which must agree).
    """
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}")
    _check_surface(X, C)
    routes = ["colength", "normalization"] if route == "both" else [route]
    if "normalization" in routes and X.normalization is None:
        raise HypothesisViolation("route normalization needs a normalization map")
    geo = geometry_checks(X, C)
    _require_isolated(geo)

    polars = [polar_curve_ideal(X, pair) for pair in C.forms]
    warnings = []
    for i, P in enumerate(polars, 1):
        sq = repeated_monomial_factors(P)
        if sq:
            warnings.append(f"polar curve of omega^{i} is not reduced (factor {', '.join(sq)})")

    seeds = _trial_seeds(seed, trials)
    generic_polars = []
    for s in seeds:
        L = generic_linear_collection(X.ring, C.partition, X.dim, s, bound)
        generic_polars.append([polar_curve_ideal(X, pair) for pair in L.forms])

    terms = []
    finals = {}
    agree = True
    for r in routes:
        main = _polar_term(X, polars[0], polars[1], r)
        if main == INFINITY:
            raise InfiniteColength("the polar curves share a component through the origin")
        terms.append(Term(f"Gamma(omega^1).Gamma(omega^2) [{r}]", main))
        values = []
        for s, (Ga, Gb) in zip(seeds, generic_polars):
            v = _polar_term(X, Ga, Gb, r)
            if v == INFINITY:
                raise InfiniteColength(f"generic polar curves (seed {s}) meet in a curve")
            values.append(v)
            terms.append(Term(f"Gamma(l^1).Gamma(l^2) [{r}]", v, s))
        if len(set(values)) != 1:
            agree = False
            warnings.append(f"generic trials disagree on route {r}: {values}; using the minimum")
        finals[r] = main - min(values)

    if len(set(finals.values())) > 1:
        raise RouteDisagreement(f"routes disagree: {finals}")
    final = finals[routes[0]]
    method = {"colength": "surface-colength", "normalization": "surface-normalization",
              "both": "surface-both"}[route]
    return final, ChernReport(method, terms, geo, final, seeds, warnings, agree)


def imult_plane(f: Polynomial, g: Polynomial) -> int | float:
    """Intersection multiplicity at the origin of two plane curves."""
    if f.ring.nvars != 2 or g.ring != f.ring:
        raise ValueError("imult_plane needs two polynomials in one 2-variable ring")
    return colength(Ideal(f.ring, [f, g]), "local")
