"""Hom spaces in the relative singularity category.

Two independent routes are provided.  The quotient route takes
``Hom(M, N)`` modulo maps factoring through add(T) for modules in the left
orthogonal of add(T), moving shifts along certificate chains.  The resolution
route resolves a complex, cuts it below its support, and walks syzygies and
cosyzygies until a Gorenstein module in degree zero remains.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cx import Complex
from .exactla import Mat, solve
from .gcat import cg_dim, gp_membership, perp_failure
from .repalg import Module, ModuleMap, cokernel, hom_space, kernel, maps_matrix, zero_module
from .resolve import cdim, complex_resolution, left_resolution
from .subcat import AddCategory, contains, factoring_subspace, left_approx_data, right_approx_data


class PerpError(ValueError):
    pass


class RepresentativeError(ValueError):
    pass


@dataclass(frozen=True)
class StableHomResult:
    pair: tuple
    dim_hom: int
    dim_factoring: int
    dim_stable: int
    perp_bound: Optional[int] = None


def stable_hom(c: AddCategory, m: Module, n: Module, bound: int = 4, check_perp: bool = True) -> StableHomResult:
    """``dim Hom(m, n)``, the part factoring through add(T), and their difference."""
    if check_perp:
        bad = perp_failure(c, m, bound)
        if bad:
            raise PerpError(f"{m.name or 'module'} is not left orthogonal to add(T): "
                            f"Ext^{bad['degree']}(-, {bad['generator']}) has dimension {bad['dim']}")
    h = hom_space(m, n).dim
    f = len(factoring_subspace(c, m, n)) if h else 0
    return StableHomResult((m.name, n.name), h, f, h - f, bound if check_perp else None)


# -- syzygies and cosyzygies --------------------------------------------------


def syzygy(c: AddCategory, m: Module) -> Module:
    """Kernel of the minimal right approximation."""
    return kernel(right_approx_data(c, m, minimal=True).map)[0]


def cosyzygy(c: AddCategory, m: Module) -> Module:
    """Cokernel of the minimal left approximation (must be monic)."""
    lam = left_approx_data(c, m, minimal=True).map
    if not lam.is_mono():
        raise RepresentativeError("left approximation is not monic; cosyzygy undefined")
    return cokernel(lam)[0]


def suspend(c: AddCategory, m: Module, r: int) -> Module:
    """``m[r]`` realized as a module: cosyzygies for ``r > 0``, syzygies for ``r < 0``."""
    out = m
    for _ in range(abs(r)):
        out = cosyzygy(c, out) if r > 0 else syzygy(c, out)
    return out


def chain_module(cert, n: int) -> Module:
    """``X_n`` of a certified chain, continued periodically or by zero."""
    if cert.lo <= n <= cert.hi:
        return cert.chain[n]
    side = cert.right if n > cert.hi else cert.left
    if side["kind"] == "terminated":
        return zero_module(cert.subject.algebra)
    a, b = side["from"], side["to"]
    period = abs(a - b)
    if n > cert.hi:
        return cert.chain[b + (n - b) % period]
    return cert.chain[b - (b - n) % period]


# -- representatives -----------------------------------------------------------


@dataclass
class SgRepresentative:
    subject: Complex
    module: Module          # certified, before shift normalization
    shift: int              # subject ~ module[shift]
    normalized: Module      # module[shift] as a module
    provenance: list = field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        return self.normalized.is_zero()


def sg_representative(c: AddCategory, x: Complex, depth: int = 4, bound: int = 4, seed: int = 0,
                      shortcut: bool = True) -> SgRepresentative:
    """A Gorenstein module ``G`` and shift ``r`` with ``x ~ G[r]``, normalized to ``r = 0``."""
    alg = x.algebra
    if x.is_zero():
        z = zero_module(alg)
        return SgRepresentative(x, z, 0, z, [{"step": "zero"}])
    prov = []
    if shortcut and len(x.terms) == 1:
        (j, m), = x.terms.items()
        cert = gp_membership(c, m, bound, seed)
        if cert.certified:
            prov.append({"step": "certified_module", "degree": j})
            return _normalize(c, x, m, -j, prov, bound, seed)
    i = x.min_deg - 1
    res = complex_resolution(c, x, i)
    p = res.complex()
    prov.append({"step": "replacement", "low": i})
    y, _ = kernel(p.diff(i))
    prov.append({"step": "truncation_kernel", "degree": i, "dims": list(y.dims)})
    g = cg_dim(c, y, depth, bound, seed)
    if g.status != "exact":
        raise RepresentativeError(f"Gorenstein dimension of the cut-off kernel is {g}")
    m0 = g.value
    xmod = left_resolution(c, y, m0).syzygy(m0 - 1)
    prov.append({"step": "syzygy", "count": m0})
    return _normalize(c, x, xmod, m0 - i + 1, prov, bound, seed)


def _normalize(c, x, g, r, prov, bound, seed) -> SgRepresentative:
    cert = gp_membership(c, g, bound, seed)
    if not cert.certified:
        raise RepresentativeError(f"representative module is {cert.summary()}")
    if r:
        prov.append({"step": "cosyzygy" if r > 0 else "syzygy", "count": abs(r)})
    out = suspend(c, g, r)
    return SgRepresentative(x, g, r, out, prov)


def replay(c: AddCategory, rep: SgRepresentative, depth: int = 4, bound: int = 4, seed: int = 0) -> bool:
    """Re-run the recorded construction and compare the normalized module."""
    shortcut = any(s["step"] == "certified_module" for s in rep.provenance)
    again = sg_representative(c, rep.subject, depth, bound, seed, shortcut=shortcut)
    if [s["step"] for s in again.provenance] != [s["step"] for s in rep.provenance]:
        return False
    return stably_isomorphic(c, again.normalized, rep.normalized, seed) is not None


def sg_hom_dim(c: AddCategory, x: Complex, y: Complex, n: int, depth: int = 4, bound: int = 4, seed: int = 0,
               shortcut: bool = True) -> int:
    """``dim Hom(x, y[n])`` in the singularity category, via representatives."""
    gx = sg_representative(c, x, depth, bound, seed, shortcut).normalized
    gy = sg_representative(c, y, depth, bound, seed, shortcut).normalized
    if gx.is_zero() or gy.is_zero():
        return 0
    src = suspend(c, gx, -n)
    if src.is_zero():
        return 0
    return stable_hom(c, src, gy, bound).dim_stable


# -- stable isomorphism --------------------------------------------------------


def _factoring_matrix(c, m, n) -> Mat:
    fs = factoring_subspace(c, m, n)
    return maps_matrix(fs, m, n)


def stably_isomorphic(c: AddCategory, m: Module, n: Module, seed: int = 0, trials: int = 6):
    """A pair ``(f, g)`` inverse to each other modulo add(T), or None if none was found."""
    m_zero = m.is_zero() or contains(c, m)
    n_zero = n.is_zero() or contains(c, n)
    if m_zero or n_zero:
        return (None, None) if (m_zero and n_zero) else None
    hmn, hnm = hom_space(m, n), hom_space(n, m)
    if not hmn.dim or not hnm.dim:
        return None
    fmm, fnn = _factoring_matrix(c, m, m), _factoring_matrix(c, n, n)
    rng = random.Random(seed)
    fld = m.field
    ident_m = maps_matrix([ModuleMap.identity(m)], m, m)
    candidates = list(hmn.basis) + [hmn.combination([rng.randint(-5, 5) for _ in hmn.basis]) for _ in range(trials)]
    for f in candidates:
        gf = maps_matrix([g @ f for g in hnm.basis], m, m)
        system = Mat.hstack(fld, [gf, fmm], rows=gf.rows)
        sol = solve(system, ident_m)
        if sol is None:
            continue
        g = hnm.combination(sol.entries()[:hnm.dim])
        diff = maps_matrix([f @ g - ModuleMap.identity(n)], n, n)
        if fnn.cols == 0:
            ok = diff.is_zero()
        else:
            ok = solve(fnn, diff) is not None
        if ok:
            return f, g
    return None


# -- equivalence verification -----------------------------------------------------


@dataclass
class EquivalenceReport:
    corpus: list
    shifts: list
    params: dict
    table: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    transport: list = field(default_factory=list)
    density: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and all(d["matched"] for d in self.density)


def _density_battery(c: AddCategory, corpus: Sequence[Module]) -> list:
    from .repalg import simple_modules

    alg = c.algebra
    out = []
    for g in corpus:
        out.append((f"{g.name}[1]", Complex.single(g, -1)))
        out.append((f"{g.name}[-1]", Complex.single(g, 1)))
    for s in simple_modules(alg):
        out.append((s.name, Complex.single(s)))
    for g in corpus:
        for h in corpus:
            basis = hom_space(g, h).basis
            if basis:
                f = basis[-1]
                x = Complex(alg, {-1: g, 0: h}, {-1: f})
                out.append((f"cone({g.name}->{h.name})", x))
    return out


def verify_equivalence(c: AddCategory, corpus: Sequence[Module], shifts: Sequence[int], depth: int = 4,
                       bound: int = 4, seed: int = 0) -> EquivalenceReport:
    """Compare quotient-route and resolution-route singularity Homs on a corpus."""
    rep = EquivalenceReport([g.name for g in corpus], list(shifts),
                            {"depth": depth, "bound": bound, "seed": seed})
    certs = {}
    for g in corpus:
        cert = gp_membership(c, g, bound, seed)
        if cert.certified:
            certs[g.name] = (g, cert)
        else:
            rep.skipped.append({"module": g.name, "reason": cert.summary()})
    members = list(certs.values())
    for g, _ in members:
        for h, hcert in members:
            for n in shifts:
                target = chain_module(hcert, n)
                a = 0 if target.is_zero() else stable_hom(c, g, target, bound).dim_stable
                b = sg_hom_dim(c, Complex.single(g), Complex.single(h), n, depth, bound, seed, shortcut=False)
                row = {"source": g.name, "target": h.name, "shift": n, "quotient_route": a, "resolution_route": b}
                rep.table.append(row)
                if a != b:
                    rep.mismatches.append(row)
    for g, cert in members:
        moved = chain_module(cert, 1)
        rep.transport.append({"module": g.name, "shift": 1,
                              "matches": _match_corpus(c, moved, members, seed)})
    for name, x in _density_battery(c, [g for g, _ in members]):
        try:
            r = sg_representative(c, x, depth, bound, seed, shortcut=False)
        except (RepresentativeError, ValueError) as exc:
            rep.density.append({"complex": name, "matched": False, "reason": str(exc)})
            continue
        hits = _match_corpus(c, r.normalized, members, seed)
        zero = r.normalized.is_zero() or contains(c, r.normalized)
        rep.density.append({"complex": name, "matched": bool(hits) or zero,
                            "representative": "0" if zero else (hits[0] if hits else list(r.normalized.dims)),
                            "steps": [s["step"] for s in r.provenance]})
    return rep


def _match_corpus(c, m: Module, members, seed) -> list:
    if m.is_zero() or contains(c, m):
        return ["0"]
    return [g.name for g, _ in members if stably_isomorphic(c, m, g, seed) is not None]


# -- triviality --------------------------------------------------------------------


@dataclass
class TrivialityReport:
    modules: list
    bound: int
    cdims: dict = field(default_factory=dict)
    max_cdim: Optional[int] = None
    obstructions: list = field(default_factory=list)
    stable_homs: list = field(default_factory=list)
    trusted_input: str = "caller asserts a complete irredundant list of indecomposables"

    @property
    def trivial(self) -> bool:
        return not self.obstructions and all(s["dim"] == 0 for s in self.stable_homs)


def sg_triviality(c: AddCategory, indecomposables: Sequence[Module], bound: int = 4, seed: int = 0) -> TrivialityReport:
    """Finite proper dimension on a complete list forces a vanishing singularity category."""
    rep = TrivialityReport([m.name for m in indecomposables], bound)
    finite = True
    for m in indecomposables:
        d = cdim(c, m, bound)
        rep.cdims[m.name] = str(d)
        if d.value is None:
            finite = False
            entry = {"module": m.name, "cdim": str(d)}
            if perp_failure(c, m, bound) is None:
                entry["stable_end"] = stable_hom(c, m, m, bound).dim_stable
            else:
                entry["stable_end"] = sg_hom_dim(c, Complex.single(m), Complex.single(m), 0, bound, bound, seed)
            rep.obstructions.append(entry)
    if finite:
        rep.max_cdim = max((int(v) for v in rep.cdims.values()), default=0)
    for m in indecomposables:
        for n in indecomposables:
            if perp_failure(c, m, bound) is None:
                d, route = stable_hom(c, m, n, bound).dim_stable, "quotient"
            else:
                d, route = sg_hom_dim(c, Complex.single(m), Complex.single(n), 0, bound, bound, seed), "resolution"
            rep.stable_homs.append({"source": m.name, "target": n.name, "dim": d, "route": route})
    return rep
