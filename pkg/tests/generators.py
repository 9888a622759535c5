"""Seeded random objects over the fixture algebras: add(T) complexes and C-quasi-isomorphisms."""

from __future__ import annotations

from relsing.cx import ChainMap, Complex, HomComplex, apply_homotopy, complex_sum, cone, width
from relsing.repalg import cokernel, direct_sum, hom_space, image, kernel


def random_t_module(c, rng, max_copies: int = 2):
    """A nonzero direct sum of summands of the generator."""
    while True:
        parts = [g for g in c.summands for _ in range(rng.randint(0, max_copies))]
        if parts:
            return direct_sum(parts, c.summands[0].algebra)[0]


def random_map(m, n, rng, span: int = 2):
    space = hom_space(m, n)
    return space.combination([rng.randint(-span, span) for _ in space.basis])


def random_t_complex(c, rng, width: int, low: int = 0) -> Complex:
    """A complex of add(T) objects in degrees ``low .. low + width - 1``.

    Differentials are built from the top down, each landing in the kernel of the next.
    """
    alg = c.summands[0].algebra
    top = low + width - 1
    terms = {n: random_t_module(c, rng) for n in range(low, top + 1)}
    diffs = {}
    for n in range(top - 1, low - 1, -1):
        if n + 1 in diffs:
            k, inc = kernel(diffs[n + 1])
            diffs[n] = inc @ random_map(terms[n], k, rng)
        else:
            diffs[n] = random_map(terms[n], terms[n + 1], rng)
    return Complex(alg, terms, diffs)


def random_homotopy(x: Complex, y: Complex, rng, span: int = 2) -> dict:
    h = HomComplex(x, y)
    fld = x.algebra.field
    return h.element(-1, [fld.scalar(rng.randint(-span, span)) for _ in range(h.dim(-1))])


def random_t_qis(c, rng, max_width: int = 4) -> ChainMap:
    """A C-quasi-isomorphism between add(T) complexes of width at most ``max_width``.

    ``X`` is random, ``Y = X (+) Con(id_W)`` with ``W`` random; the map is the
    inclusion or the projection, perturbed by a random null-homotopic map.
    """
    while True:
        x = random_t_complex(c, rng, rng.randint(1, max_width - 1), rng.randint(-2, 1))
        w = random_t_complex(c, rng, rng.randint(1, 2), rng.randint(x.min_deg, x.max_deg + 1))
        contractible = cone(ChainMap.identity(w))[0]
        y, injs, projs = complex_sum(x, contractible)
        if width(y) <= max_width:
            break
    if rng.random() < 0.5:
        f = injs[0]
    else:
        f = projs[0]
    return f + apply_homotopy(f.source, f.target, random_homotopy(f.source, f.target, rng))


def random_module(mods, rng, max_parts: int = 2):
    parts = [rng.choice(mods) for _ in range(rng.randint(1, max_parts))]
    return direct_sum(parts, parts[0].algebra)[0]


def random_ses(mods, rng, middle=None):
    """``(i, p)`` for ``0 -> L -> M -> N -> 0``: ``L`` is the image of a random map into ``M``.

    Degenerate sequences are redrawn a few times; a fixed ``middle`` may force one.
    """
    for _ in range(20):
        m = middle if middle is not None else random_module(mods, rng)
        x = random_module(mods, rng)
        _, _, emb = image(random_map(x, m, rng))
        _, proj = cokernel(emb)
        if not (emb.source.is_zero() or proj.target.is_zero()):
            break
    return emb, proj


def is_hom_exact(c, i, p) -> bool:
    """``Hom(G, -)`` keeps ``0 -> L -> M -> N -> 0`` exact, read off dimensions."""
    return all(hom_space(g, i.source).dim - hom_space(g, i.target).dim + hom_space(g, p.target).dim == 0
               for g in c.summands)
