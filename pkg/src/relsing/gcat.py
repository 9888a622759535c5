"""Gorenstein objects relative to add(T): certificates, conflations, Frobenius checks.

A certificate records a chain of short exact sequences
``0 -> X_j -> E_j -> X_{j+1} -> 0`` with ``E_j`` in add(T) and ``X_0`` the
subject.  Splicing them gives the window complex ``E_j`` (degree ``j``); the
chain is closed on each side either by reaching add(T) or by an isomorphism
``X_a ~ X_b`` that lets the segment between them repeat forever.  Checking
every piece for exactness and for both Hom-exactness conditions therefore
certifies a doubly infinite complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .codec import decode_map, decode_module, encode_map, encode_module
from .cx import Complex
from .exactla import rank
from .repalg import (
    Module,
    ModuleMap,
    cokernel,
    direct_sum,
    factor_through_epi,
    factor_through_mono,
    hom_space,
    is_isomorphic,
    kernel,
    maps_matrix,
    pullback,
    pushout,
    zero_module,
)
from .resolve import DimResult, left_resolution, rel_ext_dim
from .subcat import AddCategory, contains, left_approx_data, right_approx_data

CERTIFIED, REFUTED, INCONCLUSIVE = "certified", "refuted", "inconclusive"


@dataclass
class Piece:
    """``0 -> X_j --inc--> E_j --out--> X_{j+1} -> 0``."""

    index: int
    inc: ModuleMap
    out: ModuleMap

    @property
    def middle(self) -> Module:
        return self.inc.target


@dataclass
class GorensteinCertificate:
    subject: Module
    status: str
    bound: int
    seed: int
    chain: dict = field(default_factory=dict)       # j -> X_j
    pieces: dict = field(default_factory=dict)      # j -> Piece
    left: Optional[dict] = None                     # closure data
    right: Optional[dict] = None
    refutation: Optional[dict] = None

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def lo(self) -> int:
        return min(self.chain)

    @property
    def hi(self) -> int:
        return max(self.chain)

    def window(self) -> Complex:
        """The spliced complex of middle terms, ``E_j`` in degree ``j``."""
        alg = self.subject.algebra
        terms = {j: p.middle for j, p in self.pieces.items()}
        diffs = {}
        for j, p in self.pieces.items():
            nxt = self.pieces.get(j + 1)
            if nxt is not None:
                diffs[j] = nxt.inc @ p.out
        return Complex(alg, terms, diffs, check=False)

    def period(self) -> Optional[int]:
        lengths = [abs(s["to"] - s["from"]) for s in (self.left, self.right)
                   if s and s.get("kind") == "periodic"]
        return max(lengths) if lengths else None

    def summary(self) -> str:
        if self.status == CERTIFIED:
            return f"certified (left {self.left['kind']}, right {self.right['kind']})"
        if self.status == REFUTED:
            return f"refuted ({self.refutation['kind']})"
        return f"inconclusive({self.bound})"


# -- checks shared by the search and the verifier ----------------------------


def _pushforward_surjective(g: Module, p: ModuleMap) -> bool:
    """Every map ``g -> target(p)`` lifts through ``p``."""
    tgt = hom_space(g, p.target).dim
    if tgt == 0:
        return True
    src = hom_space(g, p.source)
    if src.dim == 0:
        return False
    return rank(maps_matrix([p @ h for h in src.basis], g, p.target)) == tgt


def _pullback_surjective(i: ModuleMap, g: Module) -> bool:
    """Every map ``source(i) -> g`` extends along ``i``."""
    tgt = hom_space(i.source, g).dim
    if tgt == 0:
        return True
    src = hom_space(i.target, g)
    if src.dim == 0:
        return False
    return rank(maps_matrix([h @ i for h in src.basis], i.source, g)) == tgt


def short_exact(i: ModuleMap, p: ModuleMap) -> Optional[str]:
    """None if ``0 -> L -> M -> N -> 0`` is exact, else the failure."""
    if i.target.dims != p.source.dims:
        return "maps are not composable"
    if not i.is_intertwining() or not p.is_intertwining():
        return "a map is not a module homomorphism"
    if not i.is_mono():
        return "first map is not monic"
    if not p.is_epi():
        return "second map is not epic"
    if not (p @ i).is_zero():
        return "composite is not zero"
    for a, b, c in zip(i.source.dims, i.target.dims, p.target.dims):
        if a + c != b:
            return "not exact in the middle"
    return None


def hom_exactness(c: AddCategory, i: ModuleMap, p: ModuleMap) -> dict:
    """Which summands see the sequence as Hom(G,-)-exact and Hom(-,G)-exact."""
    return {
        "covariant": [g.name for g in c.summands if not _pushforward_surjective(g, p)],
        "contravariant": [g.name for g in c.summands if not _pullback_surjective(i, g)],
    }


def check_piece(c: AddCategory, piece: Piece) -> Optional[str]:
    err = short_exact(piece.inc, piece.out)
    if err:
        return f"piece {piece.index}: {err}"
    if not contains(c, piece.middle):
        return f"piece {piece.index}: middle term not in add(T)"
    ex = hom_exactness(c, piece.inc, piece.out)
    if ex["covariant"]:
        return f"piece {piece.index}: not Hom({ex['covariant'][0]},-)-exact"
    if ex["contravariant"]:
        return f"piece {piece.index}: not Hom(-,{ex['contravariant'][0]})-exact"
    return None


def _terminal_left(x: Module) -> Piece:
    z = zero_module(x.algebra)
    return Piece(0, ModuleMap.zero(z, x), ModuleMap.identity(x))


def _terminal_right(x: Module) -> Piece:
    z = zero_module(x.algebra)
    return Piece(0, ModuleMap.identity(x), ModuleMap.zero(x, z))


# -- search -----------------------------------------------------------------


def ext_obstruction(c: AddCategory, m: Module, bound: int) -> Optional[dict]:
    for i in range(1, bound + 1):
        for g in c.generators:
            d = rel_ext_dim(c, m, g, i)
            if d:
                return {"kind": "ext", "degree": i, "generator": g.name, "dim": d}
    return None


def gp_membership(c: AddCategory, m: Module, bound: int = 4, seed: int = 0) -> GorensteinCertificate:
    """Search for a complete resolution of ``m`` with at most ``bound`` steps per side."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return c.cached("gp", (m.key(), bound, seed), lambda: _search(c, m, bound, seed))


def _search(c: AddCategory, m: Module, bound: int, seed: int) -> GorensteinCertificate:
    cert = GorensteinCertificate(m, INCONCLUSIVE, bound, seed, chain={0: m})
    if contains(c, m):
        _close_left_terminal(cert)
        _close_right_terminal(cert)
        cert.status = CERTIFIED
        return cert
    obstruction = ext_obstruction(c, m, bound)
    if obstruction:
        cert.status = REFUTED
        cert.refutation = obstruction
        return cert
    steps = 0
    while (cert.left is None or cert.right is None) and steps < bound:
        steps += 1
        if cert.left is None:
            bad = _step_left(c, cert, seed + steps)
            if bad:
                cert.status, cert.refutation = REFUTED, bad
                return cert
        if cert.right is None:
            bad = _step_right(c, cert, seed + steps)
            if bad:
                cert.status, cert.refutation = REFUTED, bad
                return cert
    if cert.left is not None and cert.right is not None:
        cert.status = CERTIFIED
    return cert


def _close_left_terminal(cert):
    lo = cert.lo
    p = _terminal_left(cert.chain[lo])
    p.index = lo - 1
    cert.pieces[lo - 1] = p
    cert.chain[lo - 1] = p.inc.source
    cert.left = {"kind": "terminated", "at": lo}


def _close_right_terminal(cert):
    hi = cert.hi
    p = _terminal_right(cert.chain[hi])
    p.index = hi
    cert.pieces[hi] = p
    cert.chain[hi + 1] = p.out.target
    cert.right = {"kind": "terminated", "at": hi}


def _find_iso(new: Module, cert, candidates: Sequence[int], seed: int):
    for b in candidates:
        res = is_isomorphic(new, cert.chain[b], seed=seed)
        if res.status == "yes":
            return b, res.witness
    return None


def _step_left(c: AddCategory, cert, seed: int) -> Optional[dict]:
    lo = cert.lo
    x = cert.chain[lo]
    if contains(c, x):
        _close_left_terminal(cert)
        return None
    ap = right_approx_data(c, x, minimal=True).map
    if not ap.is_epi():
        return {"kind": "not_admissible", "index": lo}
    k, inc = kernel(ap)
    piece = Piece(lo - 1, inc, ap)
    ex = hom_exactness(c, inc, ap)
    if ex["contravariant"]:
        return {"kind": "contravariant_exactness", "index": lo - 1, "generator": ex["contravariant"][0]}
    cert.pieces[lo - 1] = piece
    cert.chain[lo - 1] = k
    if contains(c, k):
        _close_left_terminal(cert)
        return None
    hit = _find_iso(k, cert, sorted(j for j in cert.chain if j >= lo), seed)
    if hit:
        b, w = hit
        cert.left = {"kind": "periodic", "from": lo - 1, "to": b, "iso": w}
    return None


def _step_right(c: AddCategory, cert, seed: int) -> Optional[dict]:
    hi = cert.hi
    x = cert.chain[hi]
    if contains(c, x):
        _close_right_terminal(cert)
        return None
    lam = left_approx_data(c, x, minimal=True).map
    if not lam.is_mono():
        return {"kind": "left_approximation_not_monic", "index": hi}
    q, proj = cokernel(lam)
    ex = hom_exactness(c, lam, proj)
    if ex["covariant"]:
        return {"kind": "covariant_exactness", "index": hi, "generator": ex["covariant"][0]}
    cert.pieces[hi] = Piece(hi, lam, proj)
    cert.chain[hi + 1] = q
    if contains(c, q):
        _close_right_terminal(cert)
        return None
    hit = _find_iso(q, cert, sorted((j for j in cert.chain if j <= hi), reverse=True), seed)
    if hit:
        a, w = hit
        cert.right = {"kind": "periodic", "from": hi + 1, "to": a, "iso": w}
    return None


# -- verification -----------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_certificate(c: AddCategory, cert: GorensteinCertificate) -> Verdict:
    """Re-check a certificate from its data alone."""
    if cert.status == CERTIFIED:
        return _verify_certified(c, cert)
    if cert.status == REFUTED:
        return _verify_refuted(c, cert)
    if cert.status == INCONCLUSIVE:
        for j, p in sorted(cert.pieces.items()):
            err = check_piece(c, p)
            if err:
                return Verdict(False, err)
        return Verdict(True)
    return Verdict(False, f"unknown status {cert.status!r}")


def _same_module(a: Module, b: Module) -> bool:
    return a.dims == b.dims and all(a.action[k] == b.action[k] for k in a.action)


def _verify_certified(c, cert) -> Verdict:
    if 0 not in cert.chain or not _same_module(cert.chain[0], cert.subject):
        return Verdict(False, "chain does not start at the subject")
    js = sorted(cert.pieces)
    if js != list(range(cert.lo, cert.hi)):
        return Verdict(False, "pieces do not cover the chain contiguously")
    for j in js:
        p = cert.pieces[j]
        if not (_same_module(p.inc.source, cert.chain[j]) and _same_module(p.out.target, cert.chain[j + 1])):
            return Verdict(False, f"piece {j} does not match the chain")
        err = check_piece(c, p)
        if err:
            return Verdict(False, err)
    for side, end in (("left", cert.lo), ("right", cert.hi)):
        close = getattr(cert, side)
        if close is None:
            return Verdict(False, f"{side} side is not closed")
        if close["kind"] == "terminated":
            if not cert.chain[end].is_zero():
                return Verdict(False, f"{side} termination does not end in zero")
            inner = cert.lo + 1 if side == "left" else cert.hi - 1
            if not contains(c, cert.chain[inner]):
                return Verdict(False, f"{side} termination module not in add(T)")
        elif close["kind"] == "periodic":
            a, b = close["from"], close["to"]
            if a != end or b not in cert.chain or a == b:
                return Verdict(False, f"{side} periodicity does not start at the chain end")
            w = close["iso"]
            if not (_same_module(w.source, cert.chain[a]) and _same_module(w.target, cert.chain[b])):
                return Verdict(False, f"{side} isomorphism has the wrong endpoints")
            if not w.is_intertwining() or not w.is_iso():
                return Verdict(False, f"{side} isomorphism witness is not an isomorphism")
        else:
            return Verdict(False, f"unknown closure {close['kind']!r}")
    return Verdict(True)


def _verify_refuted(c, cert) -> Verdict:
    r = cert.refutation or {}
    kind = r.get("kind")
    m = cert.subject
    if kind == "ext":
        gens = {g.name: g for g in c.generators}
        g = gens.get(r.get("generator"))
        if g is None:
            return Verdict(False, "refutation names an unknown generator")
        d = rel_ext_dim(c, m, g, int(r["degree"]))
        if d == 0:
            return Verdict(False, "relative Ext vanishes")
        if d != r.get("dim", d):
            return Verdict(False, f"relative Ext has dimension {d}, not {r['dim']}")
        return Verdict(True)
    # structural refutations are replayed by re-running the search
    again = _search(c, m, cert.bound, cert.seed)
    if again.status == REFUTED and again.refutation.get("kind") == kind:
        return Verdict(True)
    return Verdict(False, "refutation does not replay")


# -- serialization ------------------------------------------------------------


def certificate_to_dict(cert: GorensteinCertificate) -> dict:
    chain = {str(j): encode_module(x) for j, x in sorted(cert.chain.items())}
    pieces = {str(j): {"middle": encode_module(p.middle), "inc": encode_map(p.inc), "out": encode_map(p.out)}
              for j, p in sorted(cert.pieces.items())}

    def close(d):
        if d is None:
            return None
        out = {k: v for k, v in d.items() if k != "iso"}
        if "iso" in d:
            out["iso"] = encode_map(d["iso"])
        return out

    return {
        "schema": "relsing.certificate/1",
        "subject": encode_module(cert.subject),
        "status": cert.status,
        "bound": cert.bound,
        "seed": cert.seed,
        "chain": chain,
        "pieces": pieces,
        "left": close(cert.left),
        "right": close(cert.right),
        "refutation": cert.refutation,
    }


def certificate_from_dict(alg, data: dict) -> GorensteinCertificate:
    subject = decode_module(alg, data["subject"], "subject")
    chain = {int(j): decode_module(alg, x, f"X{j}") for j, x in data.get("chain", {}).items()}
    pieces = {}
    for j, p in data.get("pieces", {}).items():
        j = int(j)
        mid = decode_module(alg, p["middle"], f"E{j}")
        inc = decode_map(chain[j], mid, p["inc"], check=False)
        out = decode_map(mid, chain[j + 1], p["out"], check=False)
        pieces[j] = Piece(j, inc, out)

    def close(d):
        if d is None:
            return None
        d = dict(d)
        if "iso" in d:
            d["iso"] = decode_map(chain[d["from"]], chain[d["to"]], d["iso"], check=False)
        return d

    return GorensteinCertificate(subject, data["status"], int(data["bound"]), int(data["seed"]), chain, pieces,
                                 close(data.get("left")), close(data.get("right")), data.get("refutation"))


# -- conflations ----------------------------------------------------------------


@dataclass
class Conflation:
    i: ModuleMap
    p: ModuleMap
    exactness: dict
    certificates: tuple

    @property
    def L(self) -> Module:
        return self.i.source

    @property
    def M(self) -> Module:
        return self.i.target

    @property
    def N(self) -> Module:
        return self.p.target

    def __bool__(self):
        return True


@dataclass
class ConflationFailure:
    reason: str

    def __bool__(self):
        return False


def conflation_check(c: AddCategory, i: ModuleMap, p: ModuleMap, bound: int = 4, seed: int = 0):
    """A :class:`Conflation` if the pair qualifies, else a falsy failure with the reason."""
    err = short_exact(i, p)
    if err:
        return ConflationFailure(f"not a kernel-cokernel pair: {err}")
    ex = hom_exactness(c, i, p)
    if ex["covariant"]:
        return ConflationFailure(f"not Hom({ex['covariant'][0]},-)-exact")
    certs = tuple(gp_membership(c, x, bound, seed) for x in (i.source, i.target, p.target))
    for name, cert in zip("LMN", certs):
        if not cert.certified:
            return ConflationFailure(f"{name} is not certified: {cert.summary()}")
    ex["agree"] = not ex["contravariant"]
    return Conflation(i, p, ex, certs)


def split_conflation(c: AddCategory, g: Module, h: Module, bound: int = 4, seed: int = 0):
    s, injs, projs = direct_sum([g, h])
    return conflation_check(c, injs[0], projs[1], bound, seed)


def pullback_conflation(c: AddCategory, e: Conflation, g: ModuleMap, bound: int = 4, seed: int = 0):
    """Pull ``e`` back along ``g: Y -> N``: ``0 -> L -> P -> Y -> 0``."""
    if g.target.dims != e.N.dims:
        return ConflationFailure("map does not land in the end term")
    pb, to_m, to_y = pullback(e.p, g)
    # L -> P is (i, 0) factored through the pullback
    _, injs, _ = direct_sum([e.M, g.source])
    incl = injs[0] @ to_m + injs[1] @ to_y
    i_new = factor_through_mono(incl, injs[0] @ e.i)
    if i_new is None:
        return ConflationFailure("internal: kernel does not factor through the pullback")
    i_new = ModuleMap(e.L, pb, i_new.blocks, check=False)
    return conflation_check(c, i_new, to_y, bound, seed)


def pushout_conflation(c: AddCategory, e: Conflation, g: ModuleMap, bound: int = 4, seed: int = 0):
    """Push ``e`` out along ``g: L -> Y``: ``0 -> Y -> Q -> N -> 0``."""
    if g.source.dims != e.L.dims:
        return ConflationFailure("map does not start at the first term")
    po, from_m, from_y = pushout(e.i, g)
    s, _, projs = direct_sum([e.M, g.target])
    proj = from_m @ projs[0] + from_y @ projs[1]
    q = factor_through_epi(proj, e.p @ projs[0])
    if q is None:
        return ConflationFailure("internal: end map does not factor through the pushout")
    return conflation_check(c, from_y, q, bound, seed)


def compose_deflations(c: AddCategory, e1: Conflation, e2: Conflation, bound: int = 4, seed: int = 0):
    """``M1 -> N1 = M2 -> N2``: the composite epic with its kernel."""
    if e1.N.dims != e2.M.dims:
        return ConflationFailure("deflations are not composable")
    p = e2.p @ e1.p
    k, inc = kernel(p)
    return conflation_check(c, inc, p, bound, seed)


def compose_inflations(c: AddCategory, e1: Conflation, e2: Conflation, bound: int = 4, seed: int = 0):
    """``L1 -> M1 = L2 -> M2``: the composite monic with its cokernel."""
    if e1.M.dims != e2.L.dims:
        return ConflationFailure("inflations are not composable")
    i = e2.i @ e1.i
    q, proj = cokernel(i)
    return conflation_check(c, i, proj, bound, seed)


# -- Frobenius structure ------------------------------------------------------


@dataclass
class FrobeniusReport:
    subjects: list
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sample_conflations(c: AddCategory, gs: Sequence[Module], bound: int = 4, seed: int = 0) -> list:
    """Conflations read off certificates, plus split ones between subjects."""
    out = []
    for g in gs:
        cert = gp_membership(c, g, bound, seed)
        if not cert.certified:
            continue
        for j, p in sorted(cert.pieces.items()):
            e = conflation_check(c, p.inc, p.out, bound, seed)
            if e:
                out.append(e)
    for g in gs:
        for h in gs:
            e = split_conflation(c, g, h, bound, seed)
            if e:
                out.append(e)
    return out


def frobenius_check(c: AddCategory, gs: Sequence, bound: int = 4, seed: int = 0) -> FrobeniusReport:
    """Relative projectives of add(T) are projective and injective for sampled conflations.

    ``gs`` holds modules or certificates; certificates are re-verified first.
    """
    subjects = []
    rep = FrobeniusReport([])
    for item in gs:
        if isinstance(item, GorensteinCertificate):
            v = verify_certificate(c, item)
            name = item.subject.name or str(item.subject.dims)
            if not v or not item.certified:
                rep.failures.append({"subject": name, "check": "certificate", "reason": v.reason or item.status})
                continue
            subjects.append(item.subject)
        else:
            cert = gp_membership(c, item, bound, seed)
            if not cert.certified:
                rep.failures.append({"subject": item.name, "check": "certificate", "reason": cert.summary()})
                continue
            subjects.append(item)
    rep.subjects = [g.name for g in subjects]
    for g in subjects:
        for t in c.generators:
            d = rel_ext_dim(c, g, t, 1)
            rep.checks.append({"subject": g.name, "generator": t.name, "ext1": d})
            if d:
                rep.failures.append({"subject": g.name, "check": "ext1", "generator": t.name, "dim": d})
    for k, e in enumerate(sample_conflations(c, subjects, bound, seed)):
        for t in c.summands:
            proj = _pushforward_surjective(t, e.p)
            inj = _pullback_surjective(e.i, t)
            if not proj:
                rep.failures.append({"conflation": k, "check": "projective", "object": t.name})
            if not inj:
                rep.failures.append({"conflation": k, "check": "injective", "object": t.name})
        rep.checks.append({"conflation": k, "dims": [list(e.L.dims), list(e.M.dims), list(e.N.dims)]})
    return rep


# -- dimensions ---------------------------------------------------------------


@dataclass(frozen=True)
class GDimResult(DimResult):
    undecided: tuple = ()


def cg_dim(c: AddCategory, m: Module, depth: int = 4, bound: int = 4, seed: int = 0) -> GDimResult:
    """Least ``n <= depth`` whose syzygy ``K_{n-1}`` certifies as Gorenstein."""
    res = left_resolution(c, m, depth)
    undecided = []
    for n in range(depth + 1):
        k = res.syzygy(n - 1)
        cert = gp_membership(c, k, bound, seed)
        if cert.certified:
            if undecided:
                return GDimResult(n, depth, "inconclusive", tuple(undecided))
            return GDimResult(n, depth, "exact")
        if cert.status == INCONCLUSIVE:
            undecided.append(n)
    if undecided:
        return GDimResult(None, depth, "inconclusive", tuple(undecided))
    return GDimResult(None, depth, "exceeds")


def perp_failure(c: AddCategory, m: Module, bound: int) -> Optional[dict]:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    for i in range(1, bound + 1):
        for g in c.generators:
            d = rel_ext_dim(c, m, g, i)
            if d:
                return {"degree": i, "generator": g.name, "dim": d}
    return None


def perp_membership(c: AddCategory, m: Module, bound: int) -> bool:
    """Relative Ext^i(m, G) vanishes for every generator and 1 <= i <= bound."""
    return perp_failure(c, m, bound) is None
