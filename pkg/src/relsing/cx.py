"""Bounded cochain complexes of modules and chain maps.

Conventions, fixed once: ``shift(x, n)`` has ``x^{k+n}`` in degree ``k`` and
differential ``(-1)^n d``; the cone of ``f: X -> Y`` has ``X^{n+1} (+) Y^n``
in degree ``n`` with differential ``[[-d_X, 0], [f, d_Y]]``; the Hom complex
differential is ``D(f) = d_Y f - (-1)^n f d_X``.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .exactla import Mat, columns_of, rank, solve, stack_vectors
from .repalg import (
    AlgebraMismatch,
    Module,
    ModuleMap,
    ambient_dim,
    direct_sum,
    hom_space,
    zero_module,
)


class ComplexError(ValueError):
    pass


class Complex:
    """Finitely many nonzero terms; ``diffs[n]`` goes from degree n to n+1."""

    def __init__(self, algebra, terms: dict, diffs: Optional[dict] = None, check: bool = True):
        self.algebra = algebra
        self.terms = {}
        for n, m in sorted(terms.items()):
            if m.algebra is not algebra:
                raise AlgebraMismatch("complex terms live over different algebras")
            if not m.is_zero():
                self.terms[int(n)] = m
        self._zero = zero_module(algebra)
        self.diffs = {}
        for n, d in sorted((diffs or {}).items()):
            n = int(n)
            src, tgt = self.term(n), self.term(n + 1)
            if d.source.dims != src.dims or d.target.dims != tgt.dims:
                raise ComplexError(f"differential in degree {n} has the wrong shape")
            if src.is_zero() or tgt.is_zero():
                continue
            if check and not d.is_intertwining():
                raise ComplexError(f"differential in degree {n} is not a module map")
            if not d.is_zero():
                self.diffs[n] = ModuleMap(src, tgt, d.blocks, check=False)
        if check:
            for n in self.diffs:
                if n + 1 in self.diffs and not (self.diffs[n + 1] @ self.diffs[n]).is_zero():
                    raise ComplexError(f"d^{n + 1} o d^{n} is not zero")

    @classmethod
    def single(cls, m: Module, degree: int = 0) -> "Complex":
        return cls(m.algebra, {degree: m}, {}, check=False)

    @classmethod
    def zero(cls, algebra) -> "Complex":
        return cls(algebra, {}, {}, check=False)

    def term(self, n: int) -> Module:
        return self.terms.get(n, self._zero)

    def diff(self, n: int) -> ModuleMap:
        d = self.diffs.get(n)
        if d is None:
            return ModuleMap.zero(self.term(n), self.term(n + 1))
        return d

    @property
    def degrees(self) -> list:
        return sorted(self.terms)

    @property
    def min_deg(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    @property
    def max_deg(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        body = ", ".join(f"{n}: {m.dims}" for n, m in sorted(self.terms.items()))
        return f"Complex({{{body}}})"


def width(x: Complex) -> int:
    return len(x.terms)


class ChainMap:
    def __init__(self, source: Complex, target: Complex, components: dict, check: bool = True):
        self.source = source
        self.target = target
        self.components = {}
        for n, f in components.items():
            s, t = source.term(n), target.term(n)
            if f.source.dims != s.dims or f.target.dims != t.dims:
                raise ComplexError(f"component in degree {n} has the wrong shape")
            if s.is_zero() or t.is_zero():
                continue
            self.components[n] = ModuleMap(s, t, f.blocks, check=False)
        if check:
            for n, f in self.components.items():
                if not f.is_intertwining():
                    raise ComplexError(f"component in degree {n} is not a module map")
            if not self.commutes():
                raise ComplexError("components do not commute with the differentials")

    def __getitem__(self, n: int) -> ModuleMap:
        f = self.components.get(n)
        if f is None:
            return ModuleMap.zero(self.source.term(n), self.target.term(n))
        return f

    def degrees(self) -> list:
        return sorted(set(self.source.terms) | set(self.target.terms))

    def commutes(self) -> bool:
        lo = min(self.degrees(), default=0) - 1
        hi = max(self.degrees(), default=0)
        for n in range(lo, hi + 1):
            lhs = self.target.diff(n) @ self[n]
            rhs = self[n + 1] @ self.source.diff(n)
            if lhs != rhs:
                return False
        return True

    @classmethod
    def identity(cls, x: Complex) -> "ChainMap":
        return cls(x, x, {n: ModuleMap.identity(m) for n, m in x.terms.items()}, check=False)

    @classmethod
    def zero(cls, x: Complex, y: Complex) -> "ChainMap":
        return cls(x, y, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        comps = {n: self[n] @ other[n] for n in set(self.components) & set(other.components)}
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: self[n] + other[n] for n in set(self.components) | set(other.components)}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -f for n, f in self.components.items()}, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: f.scale(c) for n, f in self.components.items()}, check=False)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components.values())

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.degrees() == other.degrees() and (self - other).is_zero()

    __hash__ = None


# -- constructions --------------------------------------------------------


def shift(x: Complex, n: int) -> Complex:
    sign = -1 if n % 2 else 1
    terms = {k - n: m for k, m in x.terms.items()}
    diffs = {k - n: (d if sign == 1 else -d) for k, d in x.diffs.items()}
    return Complex(x.algebra, terms, diffs, check=False)


def shift_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(shift(f.source, n), shift(f.target, n), {k - n: g for k, g in f.components.items()}, check=False)


def truncate_ge(x: Complex, i: int) -> Complex:
    return Complex(x.algebra, {n: m for n, m in x.terms.items() if n >= i},
                   {n: d for n, d in x.diffs.items() if n >= i}, check=False)


def truncate_le(x: Complex, i: int) -> Complex:
    return Complex(x.algebra, {n: m for n, m in x.terms.items() if n <= i},
                   {n: d for n, d in x.diffs.items() if n + 1 <= i}, check=False)


def complex_sum(x: Complex, y: Complex) -> tuple:
    """``(X (+) Y, inclusions, projections)`` with the maps given as chain maps."""
    alg = x.algebra
    degs = set(x.terms) | set(y.terms)
    terms, sums = {}, {}
    for n in degs:
        s, injs, projs = direct_sum([x.term(n), y.term(n)], alg)
        terms[n], sums[n] = s, (injs, projs)
    diffs = {}
    for n in degs:
        if n + 1 not in terms:
            continue
        (_, p0), (i1, _) = sums[n], sums[n + 1]
        diffs[n] = i1[0] @ x.diff(n) @ p0[0] + i1[1] @ y.diff(n) @ p0[1]
    s = Complex(alg, terms, diffs, check=False)
    injs = [ChainMap(z, s, {n: sums[n][0][slot] for n in z.terms}, check=False) for slot, z in enumerate((x, y))]
    projs = [ChainMap(s, z, {n: sums[n][1][slot] for n in z.terms}, check=False) for slot, z in enumerate((x, y))]
    return s, injs, projs


class Cone:
    """The mapping cone with its triangle legs ``Y -> Con(f) -> X[1]``."""

    def __init__(self, f: ChainMap):
        x, y = f.source, f.target
        alg = x.algebra
        degs = set(k - 1 for k in x.terms) | set(y.terms)
        terms, sums = {}, {}
        for n in degs:
            s, injs, projs = direct_sum([x.term(n + 1), y.term(n)], alg)
            terms[n] = s
            sums[n] = (injs, projs)
        diffs = {}
        for n in degs:
            if n + 1 not in terms:
                continue
            (_, p0), (i1, _) = sums[n], sums[n + 1]
            d = (i1[0] @ (-x.diff(n + 1)) @ p0[0]
                 + i1[1] @ f[n + 1] @ p0[0]
                 + i1[1] @ y.diff(n) @ p0[1])
            diffs[n] = d
        self.complex = Complex(alg, terms, diffs, check=False)
        self.source = x
        self.target = y
        self.map = f
        self._sums = sums
        c = self.complex
        self.inclusion = ChainMap(y, c, {n: self._inj(n, 1) for n in y.terms}, check=False)
        x1 = shift(x, 1)
        self.projection = ChainMap(c, x1, {n: self._proj(n, 0) for n in x1.terms}, check=False)

    def _inj(self, n: int, slot: int) -> ModuleMap:
        injs, _ = self._sums[n]
        return ModuleMap(injs[slot].source, self.complex.term(n), injs[slot].blocks, check=False)

    def _proj(self, n: int, slot: int) -> ModuleMap:
        _, projs = self._sums[n]
        return ModuleMap(self.complex.term(n), projs[slot].target, projs[slot].blocks, check=False)

    def block(self, n: int):
        """Injections and projections of the degree-n term."""
        return self._sums.get(n, ([], []))


def cone(f: ChainMap) -> tuple:
    """``(Con(f), Y -> Con(f), Con(f) -> X[1])``."""
    c = Cone(f)
    return c.complex, c.inclusion, c.projection


# -- cohomology -----------------------------------------------------------


def cohomology_dims(x: Complex) -> dict:
    """Dimension of each cohomology space (as a vector space) in the support."""
    out = {}
    for n, m in x.terms.items():
        r_out = sum(rank(b) for b in x.diff(n).blocks)
        r_in = sum(rank(b) for b in x.diff(n - 1).blocks)
        out[n] = m.total_dim - r_out - r_in
    return out


def is_acyclic(x: Complex) -> bool:
    return all(v == 0 for v in cohomology_dims(x).values())


# -- Hom complexes --------------------------------------------------------


class HomComplex:
    """The total Hom complex of two bounded complexes of modules.

    Elements of degree ``n`` are dicts ``{i: f^i: x^i -> y^{i+n}}``; their
    ambient coordinates concatenate the flattened components in increasing
    ``i``.  Everything is computed lazily per degree.
    """

    def __init__(self, x: Complex, y: Complex):
        self.x = x
        self.y = y
        self.field = x.algebra.field
        self._pieces = {}
        self._basis = {}
        self._dmat = {}

    @property
    def degree_range(self) -> range:
        if self.x.is_zero() or self.y.is_zero():
            return range(0)
        return range(self.y.min_deg - self.x.max_deg, self.y.max_deg - self.x.min_deg + 1)

    def pieces(self, n: int) -> list:
        if n not in self._pieces:
            out = []
            for i, m in sorted(self.x.terms.items()):
                t = self.y.terms.get(i + n)
                if t is not None:
                    out.append((i, hom_space(m, t)))
            self._pieces[n] = out
        return self._pieces[n]

    def ambient_dim(self, n: int) -> int:
        return sum(ambient_dim(hs.source, hs.target) for _, hs in self.pieces(n))

    def dim(self, n: int) -> int:
        return sum(hs.dim for _, hs in self.pieces(n))

    def basis(self, n: int) -> list:
        """Basis elements as graded-map dicts."""
        if n not in self._basis:
            out = []
            for i, hs in self.pieces(n):
                for f in hs.basis:
                    out.append({i: f})
            self._basis[n] = out
        return self._basis[n]

    def vector(self, n: int, elt: dict) -> list:
        vec = []
        for i, hs in self.pieces(n):
            f = elt.get(i)
            if f is None:
                vec.extend([0] * ambient_dim(hs.source, hs.target))
            else:
                vec.extend(f.vector())
        return vec

    def vectors(self, n: int, elts: Sequence[dict]) -> Mat:
        return stack_vectors(self.field, self.ambient_dim(n), [self.vector(n, e) for e in elts])

    def basis_matrix(self, n: int) -> Mat:
        return self.vectors(n, self.basis(n))

    def apply_d(self, n: int, elt: dict) -> dict:
        sign = -1 if n % 2 else 1
        out = {}
        for i, f in elt.items():
            # d_Y o f contributes to component i; f o d_X to component i-1
            a = self.y.diff(i + n) @ f
            out[i] = out[i] + a if i in out else a
            b = f @ self.x.diff(i - 1)
            b = b if sign == -1 else -b
            out[i - 1] = out[i - 1] + b if i - 1 in out else b
        keep = {}
        for i, hs in self.pieces(n + 1):
            if i in out:
                keep[i] = ModuleMap(hs.source, hs.target, out[i].blocks, check=False)
        return keep

    def d_matrix(self, n: int) -> Mat:
        """Ambient images of the degree-n basis under D, as columns."""
        if n not in self._dmat:
            self._dmat[n] = self.vectors(n + 1, [self.apply_d(n, e) for e in self.basis(n)])
        return self._dmat[n]

    def d_rank(self, n: int) -> int:
        return rank(self.d_matrix(n))

    def h_dim(self, n: int) -> int:
        return self.dim(n) - self.d_rank(n) - self.d_rank(n - 1)

    def element(self, n: int, coeffs: Sequence) -> dict:
        out = {}
        for c, e in zip(coeffs, self.basis(n)):
            if c == 0:
                continue
            (i, f), = e.items()
            g = f.scale(c)
            out[i] = out[i] + g if i in out else g
        return out


def hom_complex(x: Complex, y: Complex) -> HomComplex:
    return HomComplex(x, y)


def _chain_as_elt(f: ChainMap) -> dict:
    return dict(f.components)


def is_null_homotopic(f: ChainMap) -> Optional[dict]:
    """A homotopy ``{i: s^i: X^i -> Y^{i-1}}`` with ``f = d s + s d``, if one exists."""
    h = HomComplex(f.source, f.target)
    if not f.components:
        return {}
    target = h.vectors(0, [_chain_as_elt(f)])
    sol = solve(h.d_matrix(-1), target)
    if sol is None:
        return None
    return h.element(-1, sol.entries())


def apply_homotopy(x: Complex, y: Complex, s: dict) -> ChainMap:
    """The null-homotopic map ``d s + s d``."""
    h = HomComplex(x, y)
    return ChainMap(x, y, h.apply_d(-1, s), check=False)


def chain_map_space(x: Complex, y: Complex) -> tuple:
    """``(HomComplex, basis of chain maps as coefficient columns)``."""
    from .exactla import kernel_basis

    h = HomComplex(x, y)
    kb = kernel_basis(h.d_matrix(0))
    return h, kb


def random_chain_map(x: Complex, y: Complex, rng, span: int = 3) -> ChainMap:
    h, kb = chain_map_space(x, y)
    coeffs = [0] * h.dim(0)
    for col in columns_of(kb):
        c = rng.randint(-span, span)
        for k, v in enumerate(col):
            coeffs[k] = coeffs[k] + c * v
    return ChainMap(x, y, h.element(0, [x.algebra.field.scalar(v) for v in coeffs]), check=False)


# -- relative acyclicity --------------------------------------------------


def _hom_from_generator_exact(g: Module, x: Complex) -> bool:
    return all(v == 0 for v in generator_cohomology(g, x).values())


def generator_cohomology(g: Module, x: Complex) -> dict:
    h = HomComplex(Complex.single(g), x)
    return {n: h.h_dim(n) for n in x.terms}


def is_C_acyclic(c, x: Complex) -> bool:
    """``Hom(G, x)`` is exact for every generator ``G``."""
    return all(_hom_from_generator_exact(g, x) for g in c.generators)


def blind_degrees(c, x: Complex) -> list:
    """Degrees whose term is nonzero but invisible to every generator."""
    out = []
    for n, m in x.terms.items():
        if all(hom_space(g, m).dim == 0 for g in c.generators):
            out.append(n)
    return out


def is_C_qis(c, f: ChainMap) -> bool:
    return is_C_acyclic(c, Cone(f).complex)


def lemma24_section(c, f: ChainMap) -> ChainMap:
    """A chain map ``g`` with ``f o g`` homotopic to the identity of ``f``'s target.

    Requires the target to consist of add(T) objects and ``f`` to be a relative
    quasi-isomorphism; solves chain-map and homotopy conditions jointly.
    """
    from .subcat import contains

    x, cc = f.source, f.target
    for n, m in cc.terms.items():
        if not contains(c, m):
            raise ComplexError(f"target term in degree {n} is not in add(T)")
    if not is_C_qis(c, f):
        raise ComplexError("map is not a relative quasi-isomorphism")
    hg = HomComplex(cc, x)
    hs = HomComplex(cc, cc)
    fld = x.algebra.field
    # unknowns: g in Hom^0(C, X), s in Hom^{-1}(C, C)
    dg = hg.d_matrix(0)
    fg = hs.vectors(0, [_compose_graded(f, e) for e in hg.basis(0)])
    ds = hs.d_matrix(-1)
    top = Mat.hstack(fld, [dg, Mat.zeros(fld, dg.rows, ds.cols)], rows=dg.rows)
    bottom = Mat.hstack(fld, [fg, -ds], rows=fg.rows)
    system = Mat.vstack(fld, [top, bottom], cols=dg.cols + ds.cols)
    rhs = Mat.vstack(fld, [Mat.zeros(fld, dg.rows, 1),
                           hs.vectors(0, [_chain_as_elt(ChainMap.identity(cc))])], cols=1)
    sol = solve(system, rhs)
    if sol is None:
        raise ComplexError("internal inconsistency: no section for a relative quasi-isomorphism")
    coeffs = sol.entries()[:hg.dim(0)]
    return ChainMap(cc, x, hg.element(0, coeffs), check=True)


def _compose_graded(f: ChainMap, elt: dict) -> dict:
    return {i: f[i] @ g for i, g in elt.items()}


def is_homotopic(f: ChainMap, g: ChainMap) -> bool:
    return is_null_homotopic(f - g) is not None
