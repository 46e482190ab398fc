"""Polynomial matrices, minors, and lengths of finitely presented modules."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import _kernel
from .errors import RingMismatchError
from .groebner import Ideal, count_standard_monomials
from .polyalg import GLOBAL, INFINITY, LOCAL, Polynomial, PolyRing


class PolyMatrix:
    """An r x c grid of polynomials over one ring (immutable)."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: PolyRing, entries: Sequence[Sequence[Polynomial]]):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("a matrix needs at least one row and one column")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged matrix rows")
            for p in row:
                if p.ring != ring:
                    raise RingMismatchError(f"entry {p} is not in {ring}")
        self.ring = ring
        self.entries = rows

    @classmethod
    def parse(cls, ring: PolyRing, rows: Sequence[Sequence[str]]) -> PolyMatrix:
        return cls(ring, [[ring.parse(t) for t in row] for row in rows])

    @classmethod
    def identity(cls, ring: PolyRing, size: int) -> PolyMatrix:
        return cls(ring, [[ring.one() if i == j else ring.zero() for j in range(size)]
                          for i in range(size)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.ring, list(zip(*self.entries)))

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.ring.zero()
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(p) for p in row) for row in self.entries)
        return f"PolyMatrix[{body}]"

    def determinant(self) -> Polynomial:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _Minors(self).det(tuple(range(self.cols)))

    def minors(self, size: int) -> list[Polynomial]:
        """All size x size minors, rows and columns in lexicographic order."""
        if not 1 <= size <= min(self.rows, self.cols):
            raise ValueError(f"minor size {size} out of range for {self.shape}")
        out = []
        for rows in combinations(range(self.rows), size):
            sub = PolyMatrix(self.ring, [self.entries[r] for r in rows]) if size < self.rows else self
            calc = _Minors(sub)
            for cols in combinations(range(self.cols), size):
                out.append(calc.det(cols))
        return out


class _Minors:
    """Laplace expansion along successive rows, memoized on column subsets."""

    def __init__(self, m: PolyMatrix):
        self.m = m
        self.memo: dict = {}

    def det(self, cols: tuple) -> Polynomial:
        return self._det(len(self.m.entries) - len(cols), cols)

    def _det(self, start: int, cols: tuple) -> Polynomial:
        if not cols:
            return self.m.ring.one()
        key = (start, cols)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        row = self.m.entries[start]
        acc = self.m.ring.zero()
        for pos, c in enumerate(cols):
            a = row[c]
            if not a:
                continue
            sub = self._det(start + 1, cols[:pos] + cols[pos + 1:])
            if not sub:
                continue
            term = a * sub
            acc = acc - term if pos % 2 else acc + term
        self.memo[key] = acc
        return acc


def jacobian_matrix(F: Sequence[Polynomial]) -> PolyMatrix:
    """Row i holds the gradient of F[i]."""
    if not F:
        raise ValueError("jacobian of an empty system")
    ring = F[0].ring
    return PolyMatrix(ring, [[f.diff(j) for j in range(ring.nvars)] for f in F])


def augment(J: PolyMatrix, forms: Sequence[Sequence[Polynomial]]) -> PolyMatrix:
    """Append covectors as extra rows below J."""
    rows = [list(r) for r in J.entries]
    for k, form in enumerate(forms):
        if len(form) != J.cols:
            raise ValueError(f"form {k} has length {len(form)}, expected {J.cols}")
        rows.append(list(form))
    return PolyMatrix(J.ring, rows)


def maximal_minors(A: PolyMatrix) -> Ideal:
    """Ideal of the min(r, c)-minors; zero minors are dropped."""
    return Ideal(A.ring, A.minors(min(A.rows, A.cols)))


@dataclass(frozen=True)
class ModulePresentation:
    """The cokernel F^rank / M, M spanned by the columns of ``matrix``."""

    matrix: PolyMatrix

    @property
    def ring(self) -> PolyRing:
        return self.matrix.ring

    @property
    def rank(self) -> int:
        return self.matrix.rows

    @classmethod
    def from_columns(cls, ring: PolyRing, columns: Sequence[Sequence[Polynomial]]) -> ModulePresentation:
        return cls(PolyMatrix(ring, list(zip(*columns))))

    @classmethod
    def quotient_ring(cls, ideal: Ideal) -> ModulePresentation:
        """O / I as a rank-one presentation."""
        gens = list(ideal.gens) or [ideal.ring.zero()]
        return cls(PolyMatrix(ideal.ring, [gens]))

    def column_vectors(self) -> list[dict]:
        """Columns as kernel dicts keyed by (component, *exponents)."""
        out = []
        for j in range(self.matrix.cols):
            v = {}
            for i in range(self.rank):
                for e, c in self.matrix.entries[i][j].items():
                    v[(i,) + e] = c
            if v:
                out.append(v)
        return out


def tensor_presentation(A: ModulePresentation, B: ModulePresentation) -> ModulePresentation:
    """coker(A) (x) coker(B), presented by the block matrix [A (x) I | I (x) B]."""
    if A.ring != B.ring:
        raise RingMismatchError(f"{A.ring} vs {B.ring}")
    ring = A.ring
    pa, qa = A.matrix.shape
    pb, qb = B.matrix.shape
    zero = ring.zero()
    rows = []
    for i in range(pa):
        for k in range(pb):
            row = []
            for j in range(qa):
                for l in range(pb):
                    row.append(A.matrix.entries[i][j] if k == l else zero)
            for j in range(pa):
                for l in range(qb):
                    row.append(B.matrix.entries[k][l] if i == j else zero)
            rows.append(row)
    return ModulePresentation(PolyMatrix(ring, rows))


def module_standard_basis(P: ModulePresentation, mode: str = "local") -> list:
    """Kernel standard basis of the column module (position over term)."""
    order = LOCAL if mode == "local" else GLOBAL
    ctx = _kernel.Context(order, module=True)
    return _kernel.standard_basis(ctx, P.column_vectors())


def module_colength(P: ModulePresentation, mode: str = "local") -> int | float:
    """Length of coker(P) at the origin (or globally), INFINITY if not finite."""
    entries = module_standard_basis(P, mode)
    n = P.ring.nvars
    total = 0
    for comp in range(P.rank):
        leads = [e[0][1:] for e in entries if e[0][0] == comp]
        c = count_standard_monomials(leads, n) if leads else INFINITY
        if c == INFINITY:
            return INFINITY
        total += c
    return total
