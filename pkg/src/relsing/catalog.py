"""Small algebras and modules used as fixtures and examples."""

from __future__ import annotations

from .exactla import QQ, FieldSpec, Mat
from .repalg import AlgebraPresentation, Module, Quiver, indecomposable_projective, regular_module, simple_modules


def truncated_polynomial(n: int, field: FieldSpec = QQ) -> AlgebraPresentation:
    """``k[x]/(x^n)`` as a one-loop quiver with one relation."""
    if n < 2:
        raise ValueError("need n >= 2")
    q = Quiver(["1"], [("x", "1", "1")])
    return AlgebraPresentation(q, [[(1, ("x",) * n)]], field=field, name=f"k[x]/(x^{n})")


def uniserial(alg: AlgebraPresentation, i: int) -> Module:
    """``k[x]/(x^i)`` as a module over a truncated polynomial algebra."""
    rows = [[1 if r == c + 1 else 0 for c in range(i)] for r in range(i)]
    return Module(alg, [i], {"x": Mat.from_rows(alg.field, rows, cols=i)}, name=f"M{i}")


def a2_path_algebra(field: FieldSpec = QQ) -> AlgebraPresentation:
    """Path algebra of ``1 -> 2``."""
    return AlgebraPresentation(Quiver(["1", "2"], [("a", "1", "2")]), [], field=field, name="A2")


def dual_numbers_fixture(field: FieldSpec = QQ) -> dict:
    alg = truncated_polynomial(2, field)
    return {"algebra": alg, "A": regular_module(alg).named("A"), "k": simple_modules(alg)[0].named("k")}


def cubic_fixture(field: FieldSpec = QQ) -> dict:
    alg = truncated_polynomial(3, field)
    return {"algebra": alg, "M1": uniserial(alg, 1), "M2": uniserial(alg, 2), "M3": uniserial(alg, 3)}


def a2_fixture(field: FieldSpec = QQ) -> dict:
    alg = a2_path_algebra(field)
    s1, s2 = simple_modules(alg)
    return {"algebra": alg, "S1": s1.named("S1"), "S2": s2.named("S2"),
            "P1": indecomposable_projective(alg, "1").named("P1"), "A": regular_module(alg).named("A")}
