"""Independent reference computations used to cross-check the library.

Nothing here imports the library's linear algebra or module code.  Modules
enter as plain data (dimension vector and arrow matrices) and everything is
recomputed with sympy or by exhaustive enumeration over a small prime field.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


# -- plain module data ----------------------------------------------------------


def module_data(m) -> tuple:
    """``(dims, {arrow: rows})`` with Fraction entries, read off a library module."""
    q = m.algebra.quiver
    act = {a.label: [[Fraction(x) for x in row] for row in m.action[a.label].to_rows()] for a in q.arrows}
    return list(m.dims), act


def _mat(rows, r, c):
    if r == 0 or c == 0:
        return sympy.zeros(r, c)
    return sympy.Matrix(rows)


# -- hand-written indecomposable projectives -----------------------------------------


class OracleAlgebra:
    """Vertices, arrows ``(label, source, target)`` and projectives given by path words.

    ``projectives[v]`` lists basis words of ``P_v`` (arrow labels in traversal
    order, empty word = idempotent); ``P_v`` is the span of those words with
    arrows acting by appending.
    """

    def __init__(self, vertices, arrows, projectives):
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        self.projectives = projectives

    def end(self, v, word):
        cur = v
        for a in word:
            lab, s, t = next(x for x in self.arrows if x[0] == a)
            assert s == cur
            cur = t
        return cur


def truncated_oracle(n: int) -> OracleAlgebra:
    return OracleAlgebra(["1"], [("x", "1", "1")], {"1": [("x",) * j for j in range(n)]})


def a2_oracle() -> OracleAlgebra:
    return OracleAlgebra(["1", "2"], [("a", "1", "2")], {"1": [(), ("a",)], "2": [()]})


class _Rep:
    def __init__(self, alg: OracleAlgebra, dims, act):
        self.alg, self.dims = alg, list(dims)
        self.act = {}
        for lab, s, t in alg.arrows:
            si, ti = alg.vertices.index(s), alg.vertices.index(t)
            self.act[lab] = _mat(act.get(lab, []), self.dims[ti], self.dims[si]) if act.get(lab) else \
                sympy.zeros(self.dims[ti], self.dims[si])

    def word(self, v, word):
        """Matrix of a path word from vertex ``v``."""
        m = sympy.eye(self.dims[self.alg.vertices.index(v)])
        for a in word:
            m = self.act[a] * m
        return m


def _rank(m) -> int:
    return 0 if m.rows == 0 or m.cols == 0 else m.rank()


def _nullspace(m, n):
    if n == 0:
        return sympy.zeros(0, 0)
    if m.rows == 0:
        return sympy.eye(n)
    ns = m.nullspace()
    return sympy.Matrix.hstack(*ns) if ns else sympy.zeros(n, 0)


def _colspace(m):
    if m.cols == 0 or m.rows == 0:
        return sympy.zeros(m.rows, 0)
    cs = m.columnspace()
    return sympy.Matrix.hstack(*cs) if cs else sympy.zeros(m.rows, 0)


def _top_generators(rep: _Rep):
    """Per vertex, vectors completing the radical to a basis (Nakayama)."""
    alg = rep.alg
    gens = []
    for vi, v in enumerate(alg.vertices):
        d = rep.dims[vi]
        if d == 0:
            continue
        images = [rep.act[lab] for lab, s, t in alg.arrows if t == v and rep.dims[alg.vertices.index(s)]]
        rad = _colspace(sympy.Matrix.hstack(*images)) if images else sympy.zeros(d, 0)
        basis = rad
        for j in range(d):
            e = sympy.zeros(d, 1)
            e[j] = 1
            trial = sympy.Matrix.hstack(basis, e) if basis.cols else e
            if _rank(trial) > basis.cols:
                basis = trial
                gens.append((v, e))
    return gens


def _cover(rep: _Rep):
    """Projective cover: generators, the cover representation data and the cover map blocks."""
    alg = rep.alg
    gens = _top_generators(rep)
    # per vertex w: coordinates (gen index, word) of the cover's basis at w
    coords = {w: [] for w in alg.vertices}
    for gi, (v, _) in enumerate(gens):
        for word in alg.projectives[v]:
            coords[alg.end(v, word)].append((gi, word))
    blocks = {}
    for w in alg.vertices:
        wi = alg.vertices.index(w)
        cols = [rep.word(gens[gi][0], word) * gens[gi][1] for gi, word in coords[w]]
        blocks[w] = sympy.Matrix.hstack(*cols) if cols else sympy.zeros(rep.dims[wi], 0)
    return gens, coords, blocks


def _cover_rep(alg, gens, coords) -> _Rep:
    dims = [len(coords[w]) for w in alg.vertices]
    act = {}
    for lab, s, t in alg.arrows:
        m = sympy.zeros(len(coords[t]), len(coords[s]))
        for j, (gi, word) in enumerate(coords[s]):
            new = word + (lab,)
            if (gi, new) in coords[t]:
                m[coords[t].index((gi, new)), j] = 1
        act[lab] = m
    rep = _Rep(alg, dims, {})
    rep.act = act
    return rep


def _kernel_rep(alg, cover: _Rep, blocks) -> tuple:
    """Kernel of the cover map as a representation, with its inclusion blocks."""
    inc = {}
    for wi, w in enumerate(alg.vertices):
        inc[w] = _nullspace(blocks[w], cover.dims[wi])
    dims = [inc[w].cols for w in alg.vertices]
    rep = _Rep(alg, dims, {})
    for lab, s, t in alg.arrows:
        if dims[alg.vertices.index(s)] == 0 or dims[alg.vertices.index(t)] == 0:
            continue
        image = cover.act[lab] * inc[s]
        sol, params = inc[t].gauss_jordan_solve(image)
        assert params.rows == 0  # full column rank: unique solution
        assert inc[t] * sol == image
        rep.act[lab] = sol
    return rep, inc


def classical_ext_dims(alg: OracleAlgebra, m_data, n_data, top: int) -> list:
    """``dim Ext^i(M, N)`` for ``0 <= i <= top`` from a minimal projective resolution."""
    rep = _Rep(alg, *m_data)
    nrep = _Rep(alg, *n_data)
    stages = []  # (gens, coords, inclusion of kernel into cover) per stage
    cur = rep
    for _ in range(top + 2):
        gens, coords, blocks = _cover(cur)
        cov = _cover_rep(alg, gens, coords)
        ker, inc = _kernel_rep(alg, cov, blocks)
        stages.append((gens, coords, inc, ker))
        cur = ker

    def hom_dim_gens(gens):
        return sum(nrep.dims[alg.vertices.index(v)] for v, _ in gens)

    def differential(i):
        """``Hom(F_i, N) -> Hom(F_{i+1}, N)`` in generator-value coordinates."""
        gens_i, coords_i, inc_i, ker_i = stages[i]
        gens_j = stages[i + 1][0]
        rows = hom_dim_gens(gens_j)
        cols = hom_dim_gens(gens_i)
        d = sympy.zeros(rows, cols)
        col_off, off = [], 0
        for v, _ in gens_i:
            col_off.append(off)
            off += nrep.dims[alg.vertices.index(v)]
        r = 0
        for v, vec in gens_j:
            # generator of F_{i+1} at v hits kernel vector vec, i.e. inc_i[v] * vec in F_i at v
            elt = inc_i[v] * vec
            nv = nrep.dims[alg.vertices.index(v)]
            for (gi, word), coeff in zip(coords_i[v], elt):
                if coeff == 0:
                    continue
                src_v = gens_i[gi][0]
                nw = nrep.word(src_v, word)
                c0 = col_off[gi]
                d[r:r + nv, c0:c0 + nw.cols] += coeff * nw
            r += nv
        return d

    dims = [hom_dim_gens(stages[i][0]) for i in range(top + 2)]
    ds = [differential(i) for i in range(top + 1)]
    out = []
    for i in range(top + 1):
        z = dims[i] - _rank(ds[i])
        b = _rank(ds[i - 1]) if i > 0 else 0
        out.append(z - b)
    return out


# -- exhaustive enumeration over GF(p) ---------------------------------------------


def _all_matrices(p, r, c):
    for entries in itertools.product(range(p), repeat=r * c):
        yield [list(entries[i * c:(i + 1) * c]) for i in range(r)]


def _mul(a, b, p, r, k, c):
    """Product of an ``r x k`` and a ``k x c`` matrix given as row lists."""
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(c)) for i in range(r))


def _rows(data, r, c, p):
    if not data:
        return [[0] * c for _ in range(r)]
    return [[int(x) % p for x in row] for row in data]


def brute_hom(quiver_arrows, vertices, m_data, n_data, p) -> list:
    """All intertwiners ``M -> N`` over GF(p), as tuples of vertex blocks."""
    mdims, mact = m_data
    ndims, nact = n_data
    choices = [list(_all_matrices(p, ndims[i], mdims[i])) for i in range(len(vertices))]
    out = []
    for blocks in itertools.product(*choices):
        ok = True
        for lab, s, t in quiver_arrows:
            si, ti = vertices.index(s), vertices.index(t)
            ma = _rows(mact.get(lab), mdims[ti], mdims[si], p)
            na = _rows(nact.get(lab), ndims[ti], ndims[si], p)
            lhs = _mul(blocks[ti], ma, p, ndims[ti], mdims[ti], mdims[si])
            rhs = _mul(na, blocks[si], p, ndims[ti], ndims[si], mdims[si])
            if lhs != rhs:
                ok = False
                break
        if ok:
            out.append(blocks)
    return out


def gf_rank(vectors, p) -> int:
    rows = [list(v) for v in vectors]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _flatten(blocks):
    return tuple(x for b in blocks for row in b for x in row)


def brute_hom_dim(quiver_arrows, vertices, m_data, n_data, p) -> int:
    count = len(brute_hom(quiver_arrows, vertices, m_data, n_data, p))
    d = 0
    while p ** d < count:
        d += 1
    assert p ** d == count
    return d


def brute_stable_dim(quiver_arrows, vertices, m_data, n_data, t_data, p) -> tuple:
    """``(dim Hom, dim factoring through T, difference)`` by enumeration over GF(p)."""
    into = brute_hom(quiver_arrows, vertices, m_data, t_data, p)
    out_of = brute_hom(quiver_arrows, vertices, t_data, n_data, p)
    mdims, ndims, tdims = m_data[0], n_data[0], t_data[0]
    comps = set()
    for g in into:
        for h in out_of:
            comps.add(_flatten([_mul(hb, gb, p, ndims[v], tdims[v], mdims[v])
                                for v, (hb, gb) in enumerate(zip(h, g))]))
    dh = brute_hom_dim(quiver_arrows, vertices, m_data, n_data, p)
    df = gf_rank(list(comps), p) if comps and any(any(c) for c in comps) else 0
    return dh, df, dh - df
