"""Shared inputs for the Chern obstruction tests."""

from __future__ import annotations

from localchern import FormCollection, Normalization, PolyRing, VarietyInput, differential

R3 = PolyRing(["x", "y", "z"])
SOURCE = PolyRing(["t", "z"])
OMEGA1 = [["0", "x^3", "z^2"], ["z^3", "0", "x^2"]]
OMEGA2 = [["y^2", "z^3", "0"], ["0", "y^3", "z^2"]]


def cusp_surface(with_normalization: bool = True) -> VarietyInput:
    nz = Normalization(SOURCE, (SOURCE("t^2"), SOURCE("t^3"), SOURCE("z"))) if with_normalization else None
    return VarietyInput(R3, (R3("y^2 - x^3"),), 2, nz)


def cusp_collection() -> FormCollection:
    return FormCollection.parse(R3, (1, 1), [OMEGA1, OMEGA2])


def morse_case(d: int, n: int) -> tuple[VarietyInput, FormCollection]:
    """Coordinate subspace C^d in C^n with the form d(sum of squares)."""
    ring = PolyRing([f"x{i}" for i in range(1, n + 1)])
    X = VarietyInput(ring, tuple(ring.gen(i) for i in range(d, n)), d)
    f = sum((g * g for g in ring.gens()), ring.zero())
    return X, FormCollection((d,), ((differential(f),),))


def plane_function(text: str) -> tuple[VarietyInput, FormCollection]:
    ring = PolyRing(["x", "y"])
    X = VarietyInput(ring, (), 2)
    return X, FormCollection((2,), ((differential(ring(text)),),))
