"""The subcategory add(T) and its approximation theory."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactla import image_basis, solve, stack_vectors, columns_of
from .repalg import (
    AlgebraMismatch,
    Module,
    ModuleMap,
    direct_sum,
    hom_space,
    map_from_sum,
    map_into_sum,
    regular_module,
    split_summands,
)


@dataclass
class Approximation:
    """An approximation together with its summand decomposition.

    ``summands[j]`` is the index of the generator occupying the j-th slot of
    the direct sum, and ``components[j]`` the corresponding map (into ``m``
    for right approximations, out of ``m`` for left ones).
    """

    side: str
    map: ModuleMap
    summands: list
    components: list
    injections: list
    projections: list

    @property
    def object(self) -> Module:
        return self.map.source if self.side == "right" else self.map.target


class AddCategory:
    """``add(T)`` for ``T`` the direct sum of the given generators.

    Approximations run over ``summands``: the generators split into direct
    summands (see :func:`split_summands`), which keeps minimized
    approximations small without changing the subcategory.
    """

    def __init__(self, generators: Sequence[Module], name: str = "", split: bool = True):
        gens = list(generators)
        if not gens:
            raise ValueError("an additive subcategory needs at least one generator")
        alg = gens[0].algebra
        for g in gens:
            if g.algebra is not alg:
                raise AlgebraMismatch("generators live over different algebras")
        self.generators = gens
        self.algebra = alg
        self.name = name
        self.T, self.injections, self.projections = direct_sum(gens)
        self.summands = []
        for g in gens:
            parts = split_summands(g) if split else [g]
            if len(parts) == 1:
                self.summands.append(g)
            else:
                self.summands.extend(p.named(f"{g.name}.{j}") for j, p in enumerate(parts))
        self._cache = {}

    def cached(self, kind: str, key, build):
        slot = self._cache.setdefault(kind, {})
        if key not in slot:
            slot[key] = build()
        return slot[key]

    def __repr__(self):
        return f"AddCategory({self.name or [g.name for g in self.generators]})"


def _check(c: AddCategory, *ms: Module):
    for m in ms:
        if m.algebra is not c.algebra:
            raise AlgebraMismatch("module and subcategory live over different algebras")


def _assemble_right(c: AddCategory, m: Module, slots: list) -> Approximation:
    gens = [c.summands[i] for i, _ in slots]
    src, injs, projs = direct_sum(gens, c.algebra)
    comps = [t for _, t in slots]
    if comps:
        phi = map_from_sum(src, gens, comps, m)
    else:
        phi = ModuleMap.zero(src, m)
    return Approximation("right", phi, [i for i, _ in slots], comps, injs, projs)


def _assemble_left(c: AddCategory, m: Module, slots: list) -> Approximation:
    gens = [c.summands[i] for i, _ in slots]
    tgt, injs, projs = direct_sum(gens, c.algebra)
    comps = [s for _, s in slots]
    if comps:
        lam = map_into_sum(m, comps, tgt)
    else:
        lam = ModuleMap.zero(m, tgt)
    return Approximation("left", lam, [i for i, _ in slots], comps, injs, projs)


def right_approx_data(c: AddCategory, m: Module, minimal: bool = False) -> Approximation:
    _check(c, m)

    def build():
        slots = [(i, t) for i, g in enumerate(c.summands) for t in hom_space(g, m).basis]
        if minimal:
            slots = _minimize_right(c, slots)
        return _assemble_right(c, m, slots)

    hit = c.cached("right_min" if minimal else "right", m.key(), build)
    if hit.map.target is not m:
        phi = ModuleMap(hit.map.source, m, hit.map.blocks, check=False)
        comps = [ModuleMap(t.source, m, t.blocks, check=False) for t in hit.components]
        return Approximation("right", phi, hit.summands, comps, hit.injections, hit.projections)
    return hit


def left_approx_data(c: AddCategory, m: Module, minimal: bool = False) -> Approximation:
    _check(c, m)

    def build():
        slots = [(i, s) for i, g in enumerate(c.summands) for s in hom_space(m, g).basis]
        if minimal:
            slots = _minimize_left(c, slots)
        return _assemble_left(c, m, slots)

    hit = c.cached("left_min" if minimal else "left", m.key(), build)
    if hit.map.source is not m:
        lam = ModuleMap(m, hit.map.target, hit.map.blocks, check=False)
        comps = [ModuleMap(m, s.target, s.blocks, check=False) for s in hit.components]
        return Approximation("left", lam, hit.summands, comps, hit.injections, hit.projections)
    return hit


def right_approximation(c: AddCategory, m: Module, minimal: bool = False) -> ModuleMap:
    """The map from a sum of generator copies onto ``m`` indexed by Hom bases."""
    return right_approx_data(c, m, minimal).map


def left_approximation(c: AddCategory, m: Module, minimal: bool = False) -> ModuleMap:
    """The map from ``m`` into a sum of generator copies indexed by Hom bases."""
    return left_approx_data(c, m, minimal).map


def _in_span(target: ModuleMap, spanning: list) -> bool:
    if not spanning:
        return target.is_zero()
    amb = len(target.vector())
    span = stack_vectors(target.source.field, amb, [f.vector() for f in spanning])
    return solve(span, stack_vectors(target.source.field, amb, [target.vector()])) is not None


def _minimize_right(c: AddCategory, slots: list) -> list:
    """Greedily drop components factoring through the remaining ones."""
    kept = list(slots)
    j = len(kept) - 1
    while j >= 0:
        i, t = kept[j]
        others = kept[:j] + kept[j + 1:]
        spanning = []
        for l, u in others:
            for h in hom_space(c.summands[i], c.summands[l]).basis:
                spanning.append(u @ h)
        if _in_span(t, spanning):
            kept.pop(j)
        j -= 1
    return kept


def _minimize_left(c: AddCategory, slots: list) -> list:
    kept = list(slots)
    j = len(kept) - 1
    while j >= 0:
        i, s = kept[j]
        others = kept[:j] + kept[j + 1:]
        spanning = []
        for l, u in others:
            for h in hom_space(c.summands[l], c.summands[i]).basis:
                spanning.append(h @ u)
        if _in_span(s, spanning):
            kept.pop(j)
        j -= 1
    return kept


def minimize(c: AddCategory, approx: Approximation) -> Approximation:
    """Drop generator copies whose component factors through the others."""
    slots = list(zip(approx.summands, approx.components))
    if approx.side == "right":
        return _assemble_right(c, approx.map.target, _minimize_right(c, slots))
    return _assemble_left(c, approx.map.source, _minimize_left(c, slots))


def contains(c: AddCategory, m: Module) -> bool:
    """Membership in add(T): is ``id_m`` a sum of maps factoring through generators?"""
    _check(c, m)

    def build():
        if m.is_zero():
            return True
        composites = []
        for g in c.summands:
            into = hom_space(g, m).basis
            if not into:
                continue
            for s in hom_space(m, g).basis:
                for t in into:
                    composites.append(t @ s)
        return _in_span(ModuleMap.identity(m), composites)

    return c.cached("contains", m.key(), build)


def _regular_in(c: AddCategory) -> bool:
    return c.cached("regular_in", None, lambda: contains(c, regular_module(c.algebra)))


def is_admissible_for(c: AddCategory, m: Module) -> bool:
    """Is the right approximation of ``m`` epic?"""
    _check(c, m)
    if m.is_zero() or _regular_in(c):
        return True
    return right_approximation(c, m).is_epi()


def factoring_subspace(c: AddCategory, m: Module, n: Module) -> list:
    """A basis of the maps ``m -> n`` factoring through add(T)."""
    _check(c, m, n)
    composites = []
    for g in c.summands:
        outs = hom_space(g, n).basis
        if not outs:
            continue
        for lam in hom_space(m, g).basis:
            for h in outs:
                composites.append(h @ lam)
    if not composites:
        return []
    mat = stack_vectors(m.field, len(composites[0].vector()), [f.vector() for f in composites])
    return [ModuleMap.from_vector(m, n, col) for col in columns_of(image_basis(mat))]


def factoring_subspace_via(c: AddCategory, m: Module, n: Module, approx: Approximation) -> list:
    """Same subspace, generated by ``h o lambda`` for a given left approximation ``lambda``."""
    lam = approx.map
    composites = [h @ lam for h in hom_space(lam.target, n).basis]
    if not composites:
        return []
    mat = stack_vectors(m.field, len(composites[0].vector()), [f.vector() for f in composites])
    return [ModuleMap.from_vector(m, n, col) for col in columns_of(image_basis(mat))]


def is_self_orthogonal_up_to(c: AddCategory, bound: int) -> bool:
    """Classical Ext^i between generators vanishes for 1 <= i <= bound."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    from .resolve import rel_ext_dim

    proj = projective_category(c.algebra)
    for g in c.generators:
        for h in c.generators:
            for i in range(1, bound + 1):
                if rel_ext_dim(proj, g, h, i) != 0:
                    return False
    return True


def projective_category(algebra) -> AddCategory:
    """add(A), cached on the algebra."""
    cat = getattr(algebra, "_projective_category", None)
    if cat is None:
        cat = AddCategory([regular_module(algebra)], name="proj")
        algebra._projective_category = cat
    return cat
