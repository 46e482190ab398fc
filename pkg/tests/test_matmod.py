from __future__ import annotations

import numpy as np
import pytest

from localchern import (INFINITY, Ideal, ModulePresentation, PolyMatrix, PolyRing, augment,
                        colength, jacobian_matrix, maximal_minors, module_colength,
                        tensor_presentation)
from localchern.errors import RingMismatchError
from localchern.groebner import ideals_equal
from localchern.oracle import colength_truncation

R = PolyRing(["x", "y", "z"])
P = PolyRing(["x", "y"])
T = PolyRing(["t"])

OMEGA1 = [["0", "x^3", "z^2"], ["z^3", "0", "x^2"]]
OMEGA2 = [["y^2", "z^3", "0"], ["0", "y^3", "z^2"]]


def cusp_augmented(forms):
    J = jacobian_matrix([R("y^2 - x^3")])
    return augment(J, [[R(e) for e in row] for row in forms])


def test_jacobian_row_of_cusp():
    J = jacobian_matrix([R("y^2 - x^3")])
    assert J.entries == ((R("-3x^2"), R("2y"), R.zero()),)


def test_golden_determinants():
    assert cusp_augmented(OMEGA2).determinant() in (R("z^2*(2y^3 + 3x^2*z^3)"),
                                                     -R("z^2*(2y^3 + 3x^2*z^3)"))
    assert cusp_augmented(OMEGA1).determinant() in (R("-3x^7 + 2z^5*y"), R("3x^7 - 2z^5*y"))


def test_maximal_minors_of_rank_two_rows():
    A = PolyMatrix.parse(R, [["x", "y", "z"], ["0", "1", "0"]])
    assert ideals_equal(maximal_minors(A), Ideal(R, [R("x"), R("z")]))


def test_matrix_product_and_transpose():
    A = PolyMatrix.parse(P, [["x", "1"], ["0", "y"]])
    B = PolyMatrix.parse(P, [["y", "0"], ["1", "x"]])
    assert (A @ B).entries == ((P("x*y + 1"), P("x")), (P("y"), P("x*y")))
    assert (A @ B).transpose() == B.transpose() @ A.transpose()
    assert (A @ B).determinant() == A.determinant() * B.determinant()


def test_augment_checks_length():
    J = jacobian_matrix([R("x")])
    with pytest.raises(ValueError):
        augment(J, [[R("x"), R("y")]])


def test_tensor_examples():
    A = ModulePresentation(PolyMatrix.parse(P, [["x"]]))
    B = ModulePresentation(PolyMatrix.parse(P, [["y"]]))
    assert module_colength(tensor_presentation(A, B)) == 1
    zero_module = ModulePresentation(PolyMatrix.identity(P, 2))
    assert module_colength(tensor_presentation(zero_module, B)) == 0
    other = ModulePresentation(PolyMatrix.parse(R, [["x"]]))
    with pytest.raises(RingMismatchError):
        tensor_presentation(A, other)


def test_tensor_shape():
    A = ModulePresentation(PolyMatrix.parse(P, [["x", "y", "0"], ["0", "x", "y"]]))
    B = ModulePresentation(PolyMatrix.parse(P, [["x^2", "y"]]))
    M = tensor_presentation(A, B)
    assert M.rank == 2
    assert M.matrix.cols == 3 * 1 + 2 * 2


def test_module_colength_examples():
    assert module_colength(ModulePresentation(PolyMatrix.identity(P, 3))) == 0
    assert module_colength(ModulePresentation(PolyMatrix.parse(T, [["t^2", "0"], ["0", "t^3"]]))) == 5
    M = ModulePresentation.from_columns(P, [[P("x"), P("0")], [P("0"), P("y")], [P("y"), P("x")]])
    value = module_colength(M)
    assert value == colength_truncation(M).value == 3
    assert module_colength(ModulePresentation(PolyMatrix.parse(P, [["x"], ["y"]]))) == INFINITY


def random_matrix(rng, ring, rows, cols, degree=2):
    monos = [e for e in np.ndindex(*(degree + 1,) * ring.nvars) if sum(e) <= degree]
    out = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            p = ring.zero()
            for e in monos:
                if rng.random() < 0.3:
                    p = p + ring.monomial(tuple(int(v) for v in e), int(rng.integers(-3, 4)))
            row.append(p)
        out.append(row)
    return PolyMatrix(ring, out)


def unimodular(rng, ring, size):
    """Product of elementary row operations and a permutation."""
    M = PolyMatrix.identity(ring, size)
    for _ in range(3):
        i, j = rng.choice(size, 2, replace=False)
        rows = [list(r) for r in PolyMatrix.identity(ring, size).entries]
        rows[i][j] = ring.gen(int(rng.integers(ring.nvars))) * int(rng.integers(-2, 3))
        M = PolyMatrix(ring, rows) @ M
    perm = rng.permutation(size)
    Pm = PolyMatrix(ring, [[ring.one() if int(perm[i]) == j else ring.zero() for j in range(size)]
                          for i in range(size)])
    scale = PolyMatrix(ring, [[ring.const(-2) if i == j == 0 else (ring.one() if i == j else ring.zero())
                               for j in range(size)] for i in range(size)])
    return scale @ Pm @ M


@pytest.mark.parametrize("seed", range(20))
def test_minors_invariant_under_unimodular_rows(seed):
    rng = np.random.default_rng(seed)
    A = random_matrix(rng, R, 2, 3)
    U = unimodular(rng, R, 2)
    assert ideals_equal(maximal_minors(U @ A), maximal_minors(A))


@pytest.mark.parametrize("a, b", [(1, 1), (2, 3), (4, 1), (0, 2), (3, 3)])
def test_smith_form_one_variable(a, b):
    t = T.gen(0)
    D = PolyMatrix(T, [[t ** a * (1 + t), T.zero()], [T.zero(), t ** b]])
    U = PolyMatrix.parse(T, [["1", "t"], ["0", "1"]])
    M = ModulePresentation(U @ D)
    assert module_colength(M) == colength(Ideal(T, [M.matrix.determinant()])) == a + b


def test_minors_of_empty_size_rejected():
    with pytest.raises(ValueError):
        PolyMatrix.parse(P, [["x"]]).minors(2)


def test_module_colength_matches_truncation_on_random_presentations():
    checked = 0
    for seed in range(40):
        rng = np.random.default_rng(600 + seed)
        cols = []
        for comp in range(2):
            for var in range(2):
                col = [P.zero(), P.zero()]
                e = [0, 0]
                e[var] = int(rng.integers(1, 4))
                col[comp] = P.monomial(tuple(e))
                col[1 - comp] = random_matrix(rng, P, 1, 1, 3)[0, 0] * P("x*y")
                cols.append(col)
        M = ModulePresentation.from_columns(P, cols)
        oracle = colength_truncation(M, cap=25)
        if oracle.value is None:
            continue
        checked += 1
        assert module_colength(M) == oracle.value
    assert checked >= 20
