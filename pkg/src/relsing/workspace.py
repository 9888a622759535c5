"""Loading and saving workspaces: an algebra plus named modules, subcategories and complexes.

File format (JSON syntax)::

    {
      "field": "Q",
      "quiver": {"vertices": ["1"], "arrows": [["x", "1", "1"]]},
      "relations": [[["1", ["x", "x"]]]],
      "modules": {"k": {"dims": [1], "action": {"x": [["0"]]}}, "A": {"regular": true}},
      "subcategories": {"C": ["A"]},
      "complexes": {"X": {"terms": {"-1": "A", "0": "k"}, "diffs": {"-1": [[["1", "0"]]]}}},
      "defaults": {"cat": "C", "bound": 4, "depth": 4, "seed": 0}
    }

Modules may instead be given as ``{"regular": true}``, ``{"simple": v}`` or
``{"projective": v}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .codec import DecodeError, decode_field, decode_map, decode_module, encode_field, encode_map, encode_module
from .cx import Complex, ComplexError
from .repalg import (
    AlgebraPresentation,
    ModuleError,
    NotFiniteDimensional,
    Quiver,
    indecomposable_projective,
    regular_module,
    simple_modules,
)
from .subcat import AddCategory

TOP_KEYS = {"field", "quiver", "relations", "modules", "subcategories", "complexes", "defaults"}
DEFAULTS = {"bound": 4, "depth": 4, "seed": 0}


class WorkspaceError(ValueError):
    """Input problem; ``kind`` is ``"parse"`` or ``"validation"``."""

    def __init__(self, message: str, kind: str = "validation", obj: str = "", line: int = 0, column: int = 0):
        super().__init__(message)
        self.kind, self.obj, self.line, self.column = kind, obj, line, column


@dataclass
class Workspace:
    algebra: AlgebraPresentation
    modules: dict = field(default_factory=dict)
    subcategories: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    defaults: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)

    def module(self, name: str):
        if name not in self.modules:
            raise WorkspaceError(f"unknown module {name!r}", obj=name)
        return self.modules[name]

    def complex(self, name: str) -> Complex:
        if name in self.complexes:
            return self.complexes[name]
        if name in self.modules:
            return Complex.single(self.modules[name])
        raise WorkspaceError(f"unknown complex or module {name!r}", obj=name)

    def category(self, name=None) -> AddCategory:
        name = name or self.defaults.get("cat")
        if name is None:
            if len(self.subcategories) == 1:
                return next(iter(self.subcategories.values()))
            raise WorkspaceError("no subcategory given and no default set")
        if name not in self.subcategories:
            raise WorkspaceError(f"unknown subcategory {name!r}", obj=name)
        return self.subcategories[name]

    def setting(self, key: str, value=None):
        if value is not None:
            return value
        return self.defaults.get(key, DEFAULTS.get(key))


def parse_text(text: str) -> dict:
    if not text.strip():
        raise WorkspaceError("empty workspace file", kind="parse", line=1, column=1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(exc.msg, kind="parse",
                             line=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise WorkspaceError("top level must be an object", kind="parse", line=1, column=1)
    return data


def load(path) -> Workspace:
    text = Path(path).read_text(encoding="utf-8")
    return from_dict(parse_text(text))


def loads(text: str) -> Workspace:
    return from_dict(parse_text(text))


def _quiver(data) -> Quiver:
    if not isinstance(data, dict) or "vertices" not in data:
        raise WorkspaceError("quiver needs a vertex list", obj="quiver")
    arrows = []
    for a in data.get("arrows", []):
        if isinstance(a, dict):
            a = (a.get("label"), a.get("source"), a.get("target"))
        if not isinstance(a, (list, tuple)) or len(a) != 3:
            raise WorkspaceError(f"arrow {a!r} must be [label, source, target]", obj="quiver")
        arrows.append(tuple(str(x) for x in a))
    try:
        return Quiver([str(v) for v in data["vertices"]], arrows)
    except ValueError as exc:
        raise WorkspaceError(str(exc), obj="quiver") from None


def _relations(fld, data) -> list:
    rels = []
    for j, rel in enumerate(data or []):
        terms = []
        for term in rel:
            if not isinstance(term, (list, tuple)) or len(term) != 2:
                raise WorkspaceError(f"relation {j}: terms are [coefficient, path]", obj=f"relation {j}")
            coeff, path = term
            try:
                c = fld.parse(coeff)
            except ValueError as exc:
                raise WorkspaceError(f"relation {j}: {exc}", obj=f"relation {j}") from None
            terms.append((c, tuple(path)))
        rels.append(terms)
    return rels


def from_dict(data: dict) -> Workspace:
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise WorkspaceError(f"unknown top-level keys {sorted(unknown)}")
    try:
        fld = decode_field(data.get("field", "Q"))
    except (DecodeError, ValueError) as exc:
        raise WorkspaceError(str(exc), obj="field") from None
    quiver = _quiver(data.get("quiver"))
    try:
        alg = AlgebraPresentation(quiver, _relations(fld, data.get("relations")), field=fld)
        alg.basis
    except (ValueError, NotFiniteDimensional) as exc:
        raise WorkspaceError(f"algebra: {exc}", obj="algebra") from None
    ws = Workspace(alg, source=data)
    names = set()

    def claim(name):
        if name in names:
            raise WorkspaceError(f"duplicate name {name!r}", obj=name)
        names.add(name)

    for name, spec in (data.get("modules") or {}).items():
        claim(name)
        ws.modules[name] = _module(alg, name, spec)
    for name, gens in (data.get("subcategories") or {}).items():
        claim(name)
        if not isinstance(gens, list) or not gens:
            raise WorkspaceError(f"subcategory {name}: needs a nonempty generator list", obj=name)
        ws.subcategories[name] = AddCategory([ws.module(g) for g in gens], name=name)
    for name, spec in (data.get("complexes") or {}).items():
        claim(name)
        ws.complexes[name] = _complex(ws, name, spec)
    defaults = dict(data.get("defaults") or {})
    for key in ("bound", "depth", "seed"):
        if key in defaults and not isinstance(defaults[key], int):
            raise WorkspaceError(f"default {key} must be an integer", obj="defaults")
    if "cat" in defaults and defaults["cat"] not in ws.subcategories:
        raise WorkspaceError(f"default subcategory {defaults['cat']!r} is not defined", obj="defaults")
    ws.defaults = defaults
    return ws


def _module(alg, name, spec):
    if not isinstance(spec, dict):
        raise WorkspaceError(f"module {name}: expected an object", obj=name)
    try:
        if spec.get("regular"):
            return regular_module(alg).named(name)
        if "simple" in spec:
            return simple_modules(alg)[alg.quiver.index(str(spec["simple"]))].named(name)
        if "projective" in spec:
            return indecomposable_projective(alg, str(spec["projective"])).named(name)
        return decode_module(alg, spec, name)
    except (DecodeError, ModuleError, ValueError) as exc:
        raise WorkspaceError(f"module {name}: {exc}", obj=name) from None


def _complex(ws, name, spec):
    if not isinstance(spec, dict) or "terms" not in spec:
        raise WorkspaceError(f"complex {name}: needs terms", obj=name)
    try:
        terms = {int(k): ws.module(v) for k, v in spec["terms"].items()}
        diffs = {}
        for k, blocks in (spec.get("diffs") or {}).items():
            k = int(k)
            if k not in terms or k + 1 not in terms:
                raise WorkspaceError(f"complex {name}: differential {k} needs terms {k} and {k + 1}", obj=name)
            diffs[k] = decode_map(terms[k], terms[k + 1], blocks)
        return Complex(ws.algebra, terms, diffs)
    except WorkspaceError:
        raise
    except (DecodeError, ModuleError, ComplexError, ValueError) as exc:
        raise WorkspaceError(f"complex {name}: {exc}", obj=name) from None


def to_dict(ws: Workspace) -> dict:
    """A self-contained description with every module written out explicitly."""
    q = ws.algebra.quiver
    alg = ws.algebra
    out = {
        "field": encode_field(alg.field),
        "quiver": {"vertices": list(q.vertices), "arrows": [[a.label, a.source, a.target] for a in q.arrows]},
        "relations": [[[alg.field.format(c), list(p)] for c, p in rel] for rel in alg.relations],
        "modules": {n: encode_module(m) for n, m in ws.modules.items()},
        "subcategories": {n: [g.name for g in c.generators] for n, c in ws.subcategories.items()},
        "complexes": {},
        "defaults": dict(ws.defaults),
    }
    for n, x in ws.complexes.items():
        names = {}
        for k, m in x.terms.items():
            hit = [mn for mn, mm in ws.modules.items() if mm is m or mm.name == m.name]
            names[str(k)] = hit[0] if hit else m.name
        out["complexes"][n] = {"terms": names, "diffs": {str(k): encode_map(d) for k, d in x.diffs.items()}}
    return out


def dump(ws: Workspace, path) -> None:
    Path(path).write_text(json.dumps(to_dict(ws), indent=2, sort_keys=True) + "\n", encoding="utf-8")
