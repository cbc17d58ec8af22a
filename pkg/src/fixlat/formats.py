"""JSON file formats: poset/instance files and dataflow program files.

Instance files may start with ``#`` comment lines (reproduction bundles carry
a provenance header there); the rest must be one JSON object.
"""
from __future__ import annotations

import json

import jsonschema

from .endomap import Endomap
from .errors import FixlatError, SchemaError
from .lab.instances import Instance
from .order import FULL, HASSE, FinitePoset, build_poset

_NAME_LIST = {"type": "array", "items": {"type": "string"}, "minItems": 1}
_PAIRS = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
}
_MAP = {"type": "object", "additionalProperties": {"type": "string"}}

POSET_SCHEMA = {
    "type": "object",
    "properties": {
        "elements": _NAME_LIST,
        "relation_kind": {"enum": [HASSE, FULL]},
        "le": _PAIRS,
    },
    "required": ["elements", "relation_kind", "le"],
    "additionalProperties": False,
}

INSTANCE_SCHEMA = {
    "type": "object",
    "properties": {**POSET_SCHEMA["properties"], "function": _MAP, "a0": {"type": "string"}, "g": _MAP},
    "required": ["elements", "relation_kind", "le", "function", "a0"],
    "additionalProperties": False,
}

_INSTR = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["assign_const", "assign_var", "assign_add", "assign_mul", "skip"]},
        "var": {"type": "string"},
        "value": {"type": "integer"},
        "src": {"type": "string"},
        "lhs": {"type": "string"},
        "rhs": {"type": "string"},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

PROGRAM_SCHEMA = {
    "type": "object",
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}},
        "entry": {"type": "string"},
        "nodes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"id": {"type": "string"}, "instr": _INSTR},
                "required": ["id", "instr"],
                "additionalProperties": False,
            },
        },
        "edges": _PAIRS,
    },
    "required": ["vars", "entry", "nodes", "edges"],
    "additionalProperties": False,
}


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(doc, schema):
    """Raise SchemaError for the first violation, with a JSON path to it."""
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise SchemaError(_path(err.absolute_path), err.message)


def loads_json(text: str):
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    try:
        return json.loads(body)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from None


def poset_from_doc(doc) -> FinitePoset:
    try:
        return build_poset(doc["elements"], [tuple(pair) for pair in doc["le"]], doc["relation_kind"])
    except FixlatError as e:
        raise SchemaError("$.le", str(e)) from None
    except ValueError as e:
        raise SchemaError("$.elements", str(e)) from None


def _map_from_doc(p: FinitePoset, doc, key) -> Endomap:
    table = doc[key]
    for name in p.names:
        if name not in table:
            raise SchemaError(f"$.{key}", f"no image given for element {name!r}")
    for k, v in table.items():
        if k not in p._index:
            raise SchemaError(f"$.{key}.{k}", f"unknown element {k!r}")
        if v not in p._index:
            raise SchemaError(f"$.{key}.{k}", f"unknown element {v!r}")
    return Endomap(p, table)


def instance_from_doc(doc) -> Instance:
    validate(doc, INSTANCE_SCHEMA)
    p = poset_from_doc(doc)
    f = _map_from_doc(p, doc, "function")
    g = _map_from_doc(p, doc, "g") if "g" in doc else None
    if doc["a0"] not in p._index:
        raise SchemaError("$.a0", f"unknown element {doc['a0']!r}")
    return Instance(p, f, p.id(doc["a0"]), g)


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return instance_from_doc(loads_json(fh.read()))


def load_poset(path) -> FinitePoset:
    with open(path, encoding="utf-8") as fh:
        doc = loads_json(fh.read())
    validate(doc, POSET_SCHEMA)
    return poset_from_doc(doc)


def poset_to_doc(p: FinitePoset) -> dict:
    return {
        "elements": list(p.names),
        "relation_kind": HASSE,
        "le": [[p.names[x], p.names[y]] for x, y in sorted(p.covers)],
    }


def instance_to_doc(inst: Instance) -> dict:
    doc = poset_to_doc(inst.poset)
    doc["function"] = inst.f.as_names()
    doc["a0"] = inst.poset.names[inst.a0]
    if inst.g is not None:
        doc["g"] = inst.g.as_names()
    return doc


def dumps_instance(inst: Instance, header: str | None = None) -> str:
    """Instance file text: one top-level key per line, values kept compact."""
    doc = instance_to_doc(inst)
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}" for k, v in doc.items())
    text = "{\n" + body + "\n}"
    if header:
        text = f"# {header}\n{text}"
    return text + "\n"


def load_program_doc(path):
    with open(path, encoding="utf-8") as fh:
        doc = loads_json(fh.read())
    validate(doc, PROGRAM_SCHEMA)
    return doc
