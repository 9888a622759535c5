"""Quivers with relations and their finite-dimensional representations.

A left module over ``kQ/I`` is stored as a representation: one vector space
per vertex and one matrix per arrow (``target_dim x source_dim``).  A path is
a tuple of arrow labels in traversal order, so the path ``(a, b)`` acts as
``M(b) @ M(a)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .exactla import (
    QQ,
    FieldSpec,
    Mat,
    columns_of,
    complement_columns,
    image_basis,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    solve,
    stack_vectors,
)


class AlgebraMismatch(ValueError):
    pass


class ModuleError(ValueError):
    pass


class NotFiniteDimensional(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Sequence):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            if a.source not in self.vertices or a.target not in self.vertices:
                raise ValueError(f"arrow {a.label!r} references an unknown vertex")
            arrs.append(a)
        self.arrows = tuple(arrs)
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels) or set(labels) & set(self.vertices):
            raise ValueError("arrow labels must be unique and distinct from vertex labels")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._arrow = {a.label: a for a in self.arrows}

    def index(self, v: str) -> int:
        return self._vindex[v]

    def arrow(self, label: str) -> Arrow:
        return self._arrow[label]

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))


# A basis element of the path algebra: (source vertex, arrow labels).
PathElt = tuple


class AlgebraPresentation:
    """``kQ/I`` for a quiver ``Q`` and relations ``I``.

    Each relation is a list of ``(coefficient, path)`` pairs whose paths have
    length >= 2 and share source and target.  The algebra is computed as
    ``kQ/(I + J^L)`` where ``L`` is the first length at which every path lies
    in ``I + J^(L+1)``; for admissible ideals this is exactly ``kQ/I``.
    """

    def __init__(self, quiver: Quiver, relations: Sequence = (), field: FieldSpec = QQ,
                 max_length: int = 64, max_paths: int = 20000, name: str = ""):
        self.quiver = quiver
        self.field = field
        self.name = name
        self.max_length = max_length
        self.max_paths = max_paths
        rels = []
        for rel in relations:
            terms = []
            for coeff, path in rel:
                path = tuple(path)
                if len(path) < 2:
                    raise ValueError("relations must be combinations of paths of length >= 2")
                self._check_path(path)
                terms.append((field.scalar(coeff), path))
            ends = {(self.path_source(p), self.path_target(p)) for _, p in terms}
            if len(ends) > 1:
                raise ValueError("paths in a relation must be parallel")
            if terms:
                rels.append(tuple(terms))
        self.relations = tuple(rels)
        self._build_basis()

    # paths ----------------------------------------------------------------

    def _check_path(self, path):
        for a, b in zip(path, path[1:]):
            if self.quiver.arrow(a).target != self.quiver.arrow(b).source:
                raise ValueError(f"path {path} is not composable")

    def path_source(self, path) -> str:
        return self.quiver.arrow(path[0]).source

    def path_target(self, path) -> str:
        return self.quiver.arrow(path[-1]).target

    def _paths_by_length(self, max_len: int) -> list:
        q = self.quiver
        layers = [[(v, ()) for v in q.vertices]]
        total = len(layers[0])
        out_arrows = {v: [a for a in q.arrows if a.source == v] for v in q.vertices}
        for _ in range(max_len):
            nxt = []
            for v, p in layers[-1]:
                end = q.arrow(p[-1]).target if p else v
                for a in out_arrows[end]:
                    nxt.append((v, p + (a.label,)))
            total += len(nxt)
            if total > self.max_paths:
                raise NotFiniteDimensional(
                    f"path enumeration exceeded {self.max_paths} paths; algebra not visibly finite-dimensional")
            layers.append(nxt)
        return layers

    def _build_basis(self):
        field = self.field
        for L in range(1, self.max_length + 1):
            layers = self._paths_by_length(L)
            if not layers[L]:
                break
            if self._top_layer_in_ideal(layers, L):
                break
        else:
            raise NotFiniteDimensional(
                f"no path length <= {self.max_length} lies in the ideal; algebra not visibly finite-dimensional")
        self.nilpotency = L
        paths = [e for layer in layers[:L] for e in layer]
        index = {e: i for i, e in enumerate(paths)}
        gens = self._ideal_generators(layers, L, index, truncate=L)
        n = len(paths)
        gen_mat = stack_vectors(field, n, gens)
        aug = Mat.hstack(field, [gen_mat, Mat.identity(field, n)])
        _, pivots = rref(aug)
        chosen = [p - gen_mat.cols for p in pivots if p >= gen_mat.cols]
        self.basis = [paths[i] for i in chosen]
        basis_mat = Mat.identity(field, n).select_cols(chosen)
        # normal form: coordinates of every short path in the chosen basis
        sys = Mat.hstack(field, [basis_mat, gen_mat])
        sol = solve(sys, Mat.identity(field, n))
        self._nf = sol.select_rows(range(len(chosen)))
        self._path_index = index
        self._basis_index = {e: i for i, e in enumerate(self.basis)}

    def _ideal_generators(self, layers, L, index, truncate):
        """Vectors ``u.r.w`` truncated to paths shorter than ``truncate``."""
        q = self.quiver
        gens = []
        n = len(index)
        for rel in self.relations:
            s = self.path_source(rel[0][1])
            t = self.path_target(rel[0][1])
            minlen = min(len(p) for _, p in rel)
            for lu in range(0, truncate - minlen):
                prefixes = [p for v, p in layers[lu] if (q.arrow(p[-1]).target if p else v) == s]
                for u in prefixes:
                    for lw in range(0, truncate - minlen - lu):
                        suffixes = [p for v, p in layers[lw] if v == t]
                        for w in suffixes:
                            vec = [0] * n
                            hit = False
                            for c, path in rel:
                                full = u + path + w
                                if len(full) < truncate:
                                    src = s if not u else self.path_source(u)
                                    vec[index[(src, full)]] += self.field._to_flint(c)
                                    hit = True
                            if hit:
                                gens.append(vec)
        return gens

    def _top_layer_in_ideal(self, layers, L) -> bool:
        paths = [e for layer in layers[:L + 1] for e in layer]
        index = {e: i for i, e in enumerate(paths)}
        gens = self._ideal_generators(layers, L + 1, index, truncate=L + 1)
        gen_mat = stack_vectors(self.field, len(paths), gens)
        r0 = rank(gen_mat)
        top = [index[e] for e in layers[L]]
        extra = Mat.identity(self.field, len(paths)).select_cols(top)
        return rank(Mat.hstack(self.field, [gen_mat, extra])) == r0

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce_path(self, elt: PathElt) -> list:
        """Coordinates of a path in the normal-form basis."""
        v, p = elt
        if len(p) >= self.nilpotency:
            return [0] * self.dim
        col = self._nf.col(self._path_index[elt])
        return col.raw_entries()

    def basis_target(self, elt: PathElt) -> str:
        v, p = elt
        return self.quiver.arrow(p[-1]).target if p else v

    def __repr__(self):
        return f"AlgebraPresentation({self.name or 'kQ/I'}, dim={self.dim}, field={self.field})"


def _path_matrix(m: "Module", path) -> Mat:
    out = None
    for a in path:
        mat = m.action[a]
        out = mat if out is None else mat @ out
    if out is None:
        raise ValueError("empty path")
    return out


class Module:
    """A finite-dimensional representation of a quiver with relations."""

    __slots__ = ("algebra", "dims", "action", "name", "_key")

    def __init__(self, algebra: AlgebraPresentation, dims, action: dict, name: str = "", check: bool = True):
        q = algebra.quiver
        if isinstance(dims, dict):
            dims = [dims.get(v, 0) for v in q.vertices]
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(q.vertices) or any(d < 0 for d in dims):
            raise ModuleError("one nonnegative dimension per vertex required")
        act = {}
        for a in q.arrows:
            shape = (dims[q.index(a.target)], dims[q.index(a.source)])
            mat = action.get(a.label) if action else None
            if mat is None:
                mat = Mat.zeros(algebra.field, *shape)
            elif not isinstance(mat, Mat):
                mat = Mat.from_rows(algebra.field, mat, cols=shape[1])
            if mat.shape != shape:
                raise ModuleError(f"arrow {a.label}: matrix shape {mat.shape}, expected {shape}")
            if mat.field != algebra.field:
                raise ModuleError(f"arrow {a.label}: matrix over {mat.field}, algebra over {algebra.field}")
            act[a.label] = mat
        self.algebra = algebra
        self.dims = dims
        self.action = act
        self.name = name
        self._key = None
        if check and not validate_module(self):
            raise ModuleError(f"module {name or ''} violates the relations".replace("  ", " "))

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_at(self, v: str) -> int:
        return self.dims[self.algebra.quiver.index(v)]

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.dims, tuple((a, tuple(str(x) for x in m.raw_entries()))
                                          for a, m in sorted(self.action.items())))
        return self._key

    def same_as(self, other: "Module") -> bool:
        return other.algebra is self.algebra and other.key() == self.key()

    def named(self, name: str) -> "Module":
        return Module(self.algebra, self.dims, self.action, name=name, check=False)

    def __repr__(self):
        return f"Module({self.name or '?'}, dims={self.dims})"


def _same_algebra(*modules):
    a = modules[0].algebra
    for m in modules[1:]:
        if m.algebra is not a:
            raise AlgebraMismatch("modules live over different algebras")


def validate_module(m: Module) -> bool:
    """True iff every relation (and every path of the nilpotency length) acts as zero."""
    alg = m.algebra
    for rel in alg.relations:
        s = alg.quiver.index(alg.path_source(rel[0][1]))
        t = alg.quiver.index(alg.path_target(rel[0][1]))
        total = Mat.zeros(alg.field, m.dims[t], m.dims[s])
        for c, path in rel:
            total = total + _path_matrix(m, path).scale(c)
        if not total.is_zero():
            return False
    if m.total_dim and alg.quiver.arrows:
        layer = alg._paths_by_length(alg.nilpotency)[alg.nilpotency]
        for _, p in layer:
            if not _path_matrix(m, p).is_zero():
                return False
    return True


class ModuleMap:
    """A homomorphism of representations: one block per vertex."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: Module, target: Module, blocks: Sequence[Mat], check: bool = True):
        _same_algebra(source, target)
        blocks = tuple(blocks)
        if len(blocks) != len(source.dims):
            raise ModuleError("one block per vertex required")
        for i, b in enumerate(blocks):
            if b.shape != (target.dims[i], source.dims[i]):
                raise ModuleError(f"block {i} has shape {b.shape}, expected {(target.dims[i], source.dims[i])}")
        self.source = source
        self.target = target
        self.blocks = blocks
        if check and not self.is_intertwining():
            raise ModuleError("blocks do not intertwine the arrow actions")

    @property
    def algebra(self):
        return self.source.algebra

    @classmethod
    def identity(cls, m: Module) -> "ModuleMap":
        return cls(m, m, [Mat.identity(m.field, d) for d in m.dims], check=False)

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModuleMap":
        f = source.field
        return cls(source, target, [Mat.zeros(f, t, s) for s, t in zip(source.dims, target.dims)], check=False)

    def is_intertwining(self) -> bool:
        q = self.algebra.quiver
        for a in q.arrows:
            s, t = q.index(a.source), q.index(a.target)
            if self.blocks[t] @ self.source.action[a.label] != self.target.action[a.label] @ self.blocks[s]:
                return False
        return True

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition ``self o other``."""
        if other.target.dims != self.source.dims:
            raise ModuleError("composition of non-composable maps")
        return ModuleMap(other.source, self.target, [a @ b for a, b in zip(self.blocks, other.blocks)], check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)], check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a - b for a, b in zip(self.blocks, other.blocks)], check=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [-a for a in self.blocks], check=False)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a.scale(c) for a in self.blocks], check=False)

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.blocks == other.blocks

    __hash__ = None

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_mono(self) -> bool:
        return all(rank(b) == b.cols for b in self.blocks)

    def is_epi(self) -> bool:
        return all(rank(b) == b.rows for b in self.blocks)

    def is_iso(self) -> bool:
        return all(is_invertible(b) for b in self.blocks)

    def inverse(self) -> "ModuleMap":
        return ModuleMap(self.target, self.source, [inverse(b) for b in self.blocks], check=False)

    def vector(self) -> list:
        """Ambient coordinates: the blocks flattened row-major, vertex by vertex."""
        out = []
        for b in self.blocks:
            out.extend(b.raw_entries())
        return out

    @classmethod
    def from_vector(cls, source: Module, target: Module, vec: Sequence, check: bool = False) -> "ModuleMap":
        f = source.field
        blocks = []
        pos = 0
        for s, t in zip(source.dims, target.dims):
            n = s * t
            blocks.append(Mat(f, f._raw(t, s, list(vec[pos:pos + n]))))
            pos += n
        return cls(source, target, blocks, check=check)

    def __repr__(self):
        return f"ModuleMap({self.source.name or self.source.dims} -> {self.target.name or self.target.dims})"


def ambient_dim(m: Module, n: Module) -> int:
    return sum(a * b for a, b in zip(m.dims, n.dims))


def maps_matrix(maps: Sequence[ModuleMap], source: Module, target: Module) -> Mat:
    """Columns are the ambient coordinate vectors of ``maps``."""
    return stack_vectors(source.field, ambient_dim(source, target), [f.vector() for f in maps])


class HomSpace:
    """A basis of ``Hom(M, N)`` together with its ambient coordinate matrix."""

    def __init__(self, source: Module, target: Module, basis: list):
        self.source = source
        self.target = target
        self.basis = basis
        self.matrix = maps_matrix(basis, source, target)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, maps: Sequence[ModuleMap]) -> Mat:
        """Coordinates (as columns) of maps lying in this space."""
        vecs = maps_matrix(maps, self.source, self.target)
        sol = solve(self.matrix, vecs)
        if sol is None:
            raise ModuleError("map is not in the Hom space")
        return sol

    def combination(self, coeffs: Sequence) -> ModuleMap:
        out = ModuleMap.zero(self.source, self.target)
        for c, f in zip(coeffs, self.basis):
            if c != 0:
                out = out + f.scale(c)
        return out


_HOM_CACHE_LIMIT = 4096


def _intertwiner_system(m: Module, n: Module) -> Mat:
    alg = m.algebra
    q = alg.quiver
    f = alg.field
    offsets = []
    pos = 0
    for s, t in zip(m.dims, n.dims):
        offsets.append(pos)
        pos += s * t
    total = pos
    row_blocks = []
    for a in q.arrows:
        s, t = q.index(a.source), q.index(a.target)
        rows = n.dims[t] * m.dims[s]
        if rows == 0:
            continue
        # X_t M(a) - N(a) X_s, row-major vec: (I kron M(a)^T) vec X_t - (N(a) kron I) vec X_s
        left = Mat.identity(f, n.dims[t]).kron(m.action[a.label].transpose())
        right = n.action[a.label].kron(Mat.identity(f, m.dims[s]))
        parts = []
        for v in range(len(m.dims)):
            width = m.dims[v] * n.dims[v]
            blk = Mat.zeros(f, rows, width)
            if v == t:
                blk = blk + left
            if v == s:
                blk = blk - right
            parts.append(blk)
        row_blocks.append(Mat.hstack(f, parts, rows=rows))
    if not row_blocks:
        return Mat.zeros(f, 0, total)
    return Mat.vstack(f, row_blocks, cols=total)


def hom_space(m: Module, n: Module) -> HomSpace:
    _same_algebra(m, n)
    cache = getattr(m.algebra, "_hom_cache", None)
    if cache is None:
        cache = m.algebra._hom_cache = {}
    key = (m.key(), n.key())
    hit = cache.get(key)
    if hit is not None:
        if hit.source is m and hit.target is n:
            return hit
        hs = HomSpace(m, n, [ModuleMap(m, n, f.blocks, check=False) for f in hit.basis])
        return hs
    system = _intertwiner_system(m, n)
    kb = kernel_basis(system)
    basis = [ModuleMap.from_vector(m, n, col) for col in columns_of(kb)]
    hs = HomSpace(m, n, basis)
    if len(cache) > _HOM_CACHE_LIMIT:
        cache.clear()
    cache[key] = hs
    return hs


def hom_basis(m: Module, n: Module) -> list:
    """A basis of ``Hom(M, N)`` (null space of the intertwining equations)."""
    return list(hom_space(m, n).basis)


def hom_dim(m: Module, n: Module) -> int:
    return hom_space(m, n).dim


# -- kernels, cokernels, images -------------------------------------------


def _submodule(n: Module, spans: Sequence[Mat], name: str = "") -> tuple:
    """Submodule with per-vertex column bases ``spans`` (assumed invariant)."""
    alg = n.algebra
    q = alg.quiver
    action = {}
    for a in q.arrows:
        s, t = q.index(a.source), q.index(a.target)
        img = n.action[a.label] @ spans[s]
        x = solve(spans[t], img)
        if x is None:
            raise ModuleError("subspace is not a submodule")
        action[a.label] = x
    sub = Module(alg, [b.cols for b in spans], action, name=name, check=False)
    return sub, ModuleMap(sub, n, spans, check=False)


def kernel(f: ModuleMap) -> tuple:
    spans = [kernel_basis(b) for b in f.blocks]
    return _submodule(f.source, spans)


def image(f: ModuleMap) -> tuple:
    """``(I, corestriction M -> I, inclusion I -> N)``."""
    spans = [image_basis(b) for b in f.blocks]
    sub, inc = _submodule(f.target, spans)
    core = [solve(s, b) for s, b in zip(spans, f.blocks)]
    return sub, ModuleMap(f.source, sub, core, check=False), inc


def quotient(n: Module, spans: Sequence[Mat]) -> tuple:
    """``N / U`` for a submodule given by column bases; returns the projection."""
    alg = n.algebra
    q = alg.quiver
    fld = alg.field
    projs, sections = [], []
    for v, sub in enumerate(spans):
        comp = complement_columns(sub)
        e = Mat.identity(fld, n.dims[v]).select_cols(comp)
        full = Mat.hstack(fld, [sub, e], rows=n.dims[v])
        inv = inverse(full)
        projs.append(inv.select_rows(range(sub.cols, n.dims[v])))
        sections.append(e)
    action = {}
    for a in q.arrows:
        s, t = q.index(a.source), q.index(a.target)
        action[a.label] = projs[t] @ n.action[a.label] @ sections[s]
    quo = Module(alg, [p.rows for p in projs], action, check=False)
    return quo, ModuleMap(n, quo, projs, check=False)


def cokernel(f: ModuleMap) -> tuple:
    return quotient(f.target, [image_basis(b) for b in f.blocks])


def direct_sum(ms: Sequence[Module], algebra: Optional[AlgebraPresentation] = None) -> tuple:
    """``(S, injections, projections)`` with block-diagonal actions."""
    ms = list(ms)
    if not ms:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        z = zero_module(algebra)
        return z, [], []
    _same_algebra(*ms)
    alg = ms[0].algebra
    q = alg.quiver
    fld = alg.field
    action = {a.label: Mat.block_diag(fld, [m.action[a.label] for m in ms]) for a in q.arrows}
    dims = [sum(m.dims[v] for m in ms) for v in range(len(q.vertices))]
    s = Module(alg, dims, action, check=False)
    injs, projs = [], []
    offsets = [0] * len(dims)
    for m in ms:
        ib, pb = [], []
        for v in range(len(dims)):
            e = Mat.identity(fld, dims[v]).select_cols(range(offsets[v], offsets[v] + m.dims[v]))
            ib.append(e)
            pb.append(e.transpose())
            offsets[v] += m.dims[v]
        injs.append(ModuleMap(m, s, ib, check=False))
        projs.append(ModuleMap(s, m, pb, check=False))
    return s, injs, projs


def map_from_sum(total: Module, injections_sources: Sequence[Module], components: Sequence[ModuleMap],
                 target: Module) -> ModuleMap:
    """The map ``S -> target`` given by its restrictions to the summands."""
    blocks = [Mat.hstack(target.field, [c.blocks[v] for c in components], rows=target.dims[v])
              for v in range(len(target.dims))]
    return ModuleMap(total, target, blocks, check=False)


def map_into_sum(source: Module, components: Sequence[ModuleMap], total: Module) -> ModuleMap:
    blocks = [Mat.vstack(source.field, [c.blocks[v] for c in components], cols=source.dims[v])
              for v in range(len(source.dims))]
    return ModuleMap(source, total, blocks, check=False)


def zero_module(algebra: AlgebraPresentation) -> Module:
    return Module(algebra, [0] * len(algebra.quiver.vertices), {}, name="0", check=False)


def pullback(f: ModuleMap, g: ModuleMap) -> tuple:
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``: ``(P, P -> X, P -> Y)``."""
    if f.target.dims != g.target.dims:
        raise ModuleError("pullback needs a common target")
    s, injs, projs = direct_sum([f.source, g.source])
    fg = map_from_sum(s, None, [f, -g], f.target)
    p, inc = kernel(fg)
    return p, projs[0] @ inc, projs[1] @ inc


def pushout(f: ModuleMap, g: ModuleMap) -> tuple:
    """Pushout of ``f: W -> X`` and ``g: W -> Y``: ``(Q, X -> Q, Y -> Q)``."""
    if f.source.dims != g.source.dims:
        raise ModuleError("pushout needs a common source")
    s, injs, projs = direct_sum([f.target, g.target])
    fg = map_into_sum(f.source, [f, -g], s)
    q, proj = cokernel(fg)
    return q, proj @ injs[0], proj @ injs[1]


# -- isomorphism testing --------------------------------------------------


@dataclass
class IsoResult:
    status: str  # "yes" | "no" | "unknown"
    witness: Optional[ModuleMap] = None
    reason: str = ""

    def __bool__(self):
        return self.status == "yes"


def is_isomorphic(m: Module, n: Module, seed: int = 0, trials: int = 8) -> IsoResult:
    """Randomized isomorphism test; ``yes`` and ``no`` carry proofs."""
    _same_algebra(m, n)
    if m.dims != n.dims:
        return IsoResult("no", reason=f"dimension vectors differ: {m.dims} vs {n.dims}")
    if m.total_dim == 0:
        return IsoResult("yes", ModuleMap.identity(m))
    e_m, e_n = hom_dim(m, m), hom_dim(n, n)
    h_mn, h_nm = hom_space(m, n), hom_dim(n, m)
    if len({e_m, e_n, h_mn.dim, h_nm}) > 1:
        return IsoResult("no", reason=f"dim End(M)={e_m}, End(N)={e_n}, Hom(M,N)={h_mn.dim}, Hom(N,M)={h_nm}")
    if m.same_as(n):
        return IsoResult("yes", ModuleMap(m, n, ModuleMap.identity(m).blocks, check=False))
    rng = random.Random(seed)
    fld = m.field
    span = 1000 if not fld.is_prime else fld.characteristic - 1
    for f in h_mn.basis:
        if f.is_iso():
            return IsoResult("yes", f)
    for _ in range(trials):
        coeffs = [rng.randint(-span, span) for _ in h_mn.basis]
        f = h_mn.combination(coeffs)
        if f.is_iso():
            return IsoResult("yes", f)
    return IsoResult("unknown", reason=f"{trials} random elements of Hom(M,N) were not invertible")


# -- standard modules -----------------------------------------------------


def regular_module(a: AlgebraPresentation) -> Module:
    """``A`` as a left module on its path basis (``A_v`` = basis paths ending at ``v``)."""
    q = a.quiver
    fld = a.field
    at = {v: [i for i, e in enumerate(a.basis) if a.basis_target(e) == v] for v in q.vertices}
    local = {v: {i: k for k, i in enumerate(idx)} for v, idx in at.items()}
    action = {}
    for arr in q.arrows:
        src, tgt = at[arr.source], at[arr.target]
        flat = [0] * (len(tgt) * len(src))
        for j, bi in enumerate(src):
            v, p = a.basis[bi]
            coords = a.reduce_path((v, p + (arr.label,)))
            for bk, c in enumerate(coords):
                if c != 0:
                    flat[local[arr.target][bk] * len(src) + j] = c
        action[arr.label] = Mat(fld, fld._raw(len(tgt), len(src), flat))
    return Module(a, [len(at[v]) for v in q.vertices], action, name="A", check=False)


def indecomposable_projective(a: AlgebraPresentation, v: str) -> Module:
    """``P_v = A e_v``: basis paths starting at ``v``."""
    reg = regular_module(a)
    q = a.quiver
    spans = []
    for w in q.vertices:
        idx = [i for i, e in enumerate(a.basis) if a.basis_target(e) == w]
        cols = [k for k, i in enumerate(idx) if a.basis[i][0] == v]
        spans.append(Mat.identity(a.field, len(idx)).select_cols(cols))
    sub, _ = _submodule(reg, spans, name=f"P{v}")
    return sub


def simple_modules(a: AlgebraPresentation) -> list:
    q = a.quiver
    out = []
    for v in q.vertices:
        dims = [1 if w == v else 0 for w in q.vertices]
        out.append(Module(a, dims, {}, name=f"S{v}", check=False))
    return out


def _power(f: ModuleMap, k: int) -> ModuleMap:
    out = ModuleMap.identity(f.source)
    for _ in range(k):
        out = f @ out
    return out


def split_summands(m: Module, seed: int = 0, trials: int = 6) -> list:
    """Split ``m`` into direct summands via Fitting decompositions.

    Each seeded random endomorphism ``f`` is shifted by its eigenvalues;
    whenever ``(f - c)^N`` is neither zero nor invertible, ``m`` splits as
    image plus kernel of that power.  Summands that no trial splits are
    returned as they are (they need not be indecomposable in general).
    """
    if m.total_dim == 0:
        return []
    from .exactla import rational_eigenvalues

    rng = random.Random(seed)
    hs = hom_space(m, m)
    n = m.total_dim
    fld = m.field
    span = 7 if not fld.is_prime else fld.characteristic - 1
    candidates = list(hs.basis)
    for _ in range(trials):
        candidates.append(hs.combination([rng.randint(-span, span) for _ in hs.basis]))
    for f in candidates:
        values = set()
        for b in f.blocks:
            values.update(rational_eigenvalues(b))
        for c in sorted(values):
            g = _power(f - ModuleMap.identity(m).scale(c), n)
            r = sum(rank(b) for b in g.blocks)
            if 0 < r < n:
                img, _ = _submodule(m, [image_basis(b) for b in g.blocks])
                ker, _ = kernel(g)
                return split_summands(img, seed + 1, trials) + split_summands(ker, seed + 2, trials)
    return [m]


def factor_through_epi(p: ModuleMap, h: ModuleMap) -> Optional[ModuleMap]:
    """``x`` with ``x o p = h`` (``p`` epic, ``h`` vanishing on its kernel), if any."""
    blocks = []
    for pb, hb in zip(p.blocks, h.blocks):
        x = solve(pb.transpose(), hb.transpose())
        if x is None:
            return None
        blocks.append(x.transpose())
    return ModuleMap(p.target, h.target, blocks, check=False)


def factor_through_mono(i: ModuleMap, h: ModuleMap) -> Optional[ModuleMap]:
    """``x`` with ``i o x = h`` (``i`` monic, image of ``h`` inside that of ``i``), if any."""
    blocks = []
    for ib, hb in zip(i.blocks, h.blocks):
        x = solve(ib, hb)
        if x is None:
            return None
        blocks.append(x)
    return ModuleMap(h.source, i.source, blocks, check=False)
