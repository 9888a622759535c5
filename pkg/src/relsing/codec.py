"""JSON-ready encodings of scalars, matrices, modules and maps."""

from __future__ import annotations

from .exactla import FieldSpec, Mat
from .repalg import AlgebraPresentation, Module, ModuleMap


class DecodeError(ValueError):
    pass


def encode_field(f: FieldSpec):
    return "Q" if not f.is_prime else f"GF({f.characteristic})"


def decode_field(text) -> FieldSpec:
    if text in ("Q", "rationals", None):
        return FieldSpec.rationals()
    if isinstance(text, dict):
        if text.get("kind") == "prime":
            return FieldSpec.prime(int(text["characteristic"]))
        return FieldSpec.rationals()
    if isinstance(text, str) and text.startswith("GF(") and text.endswith(")"):
        return FieldSpec.prime(int(text[3:-1]))
    raise DecodeError(f"unknown field {text!r}")


def encode_matrix(m: Mat) -> list:
    return [[m.field.format(x) for x in row] for row in m.to_rows()]


def decode_matrix(field: FieldSpec, rows, shape) -> Mat:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
        raise DecodeError(f"matrix must be {r}x{c}")
    for row in rows:
        for x in row:
            if not isinstance(x, str):
                raise DecodeError(f"matrix entries must be strings, got {x!r}")
    return Mat.from_rows(field, rows, cols=c) if r else Mat.zeros(field, 0, c)


def encode_module(m: Module) -> dict:
    out = {"dims": list(m.dims),
           "action": {a: encode_matrix(mat) for a, mat in sorted(m.action.items()) if mat.rows and mat.cols}}
    return out


def decode_module(alg: AlgebraPresentation, data: dict, name: str = "") -> Module:
    q = alg.quiver
    dims = data.get("dims")
    if isinstance(dims, dict):
        dims = [int(dims.get(v, 0)) for v in q.vertices]
    if not isinstance(dims, list) or len(dims) != len(q.vertices):
        raise DecodeError(f"module {name}: dims must list one count per vertex")
    action = {}
    for label, rows in (data.get("action") or {}).items():
        if label not in {a.label for a in q.arrows}:
            raise DecodeError(f"module {name}: unknown arrow {label!r}")
        a = q.arrow(label)
        shape = (dims[q.index(a.target)], dims[q.index(a.source)])
        action[label] = decode_matrix(alg.field, rows, shape)
    return Module(alg, dims, action, name=name)


def encode_map(f: ModuleMap) -> list:
    return [encode_matrix(b) for b in f.blocks]


def decode_map(source: Module, target: Module, data, check: bool = True) -> ModuleMap:
    if not isinstance(data, list) or len(data) != len(source.dims):
        raise DecodeError("map needs one block per vertex")
    blocks = [decode_matrix(source.field, rows, (t, s)) for rows, s, t in zip(data, source.dims, target.dims)]
    return ModuleMap(source, target, blocks, check=check)
