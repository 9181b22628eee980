"""JSON Schemas (draft 2020-12) for each ``hypertile --json`` subcommand output.

Exact rationals are ``"num/den"`` strings; exact reals carry a ``kind`` tag.
"""

from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?\d+/\d+$"}

EXACT = {
    "type": "object",
    "required": ["kind", "value", "approx"],
    "properties": {
        "kind": {"enum": ["rational", "six_minus_four_sqrt2", "quadratic_surd"]},
        "value": {"type": "string"},
        "approx": {"type": "number"},
    },
    "additionalProperties": False,
}

_ABC = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 3, "maxItems": 3}
_INTS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_COPY = {"type": "array", "items": _INTS, "minItems": 3, "maxItems": 3}
_VECTOR_COUNTS = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["vector", "count"],
        "properties": {"vector": _INTS, "count": {"type": "integer", "minimum": 1}},
        "additionalProperties": False,
    },
}
_BARRIERS = ["space_I", "space_II", "divisibility_I", "divisibility_II", "divisibility_III", "tiling"]


def _obj(props: dict, required=None) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": list(props) if required is None else required,
        "properties": props,
        "additionalProperties": False,
    }


THRESHOLD = _obj({
    "abc": _ABC,
    "type": {"type": "string"},
    "f": EXACT,
    "f_barrier": {"enum": _BARRIERS},
    "space1": RATIONAL,
    "space2": RATIONAL,
    "coefficient": EXACT,
    "dominant_barrier": {"type": "array", "items": {"enum": _BARRIERS}, "minItems": 1},
})

CLASSIFY = _obj({
    "abc": _ABC,
    "k": {"type": "integer"},
    "g": {"type": "integer"},
    "d": {"type": "integer"},
    "type": {"type": "string"},
    "f": EXACT,
    "codegree": RATIONAL,
    "gcd_fact": {"type": "boolean"},
})

_CERT = _obj({
    "valid": {"type": "boolean"},
    "mode": {"type": "string"},
    "copies_checked": {"type": "integer", "minimum": 0},
    "reason": {"type": "string"},
    "counterexample": {"anyOf": [{"type": "null"}, _COPY]},
})
_CERT.pop("$schema")

CONSTRUCT = _obj({
    "kind": {"enum": _BARRIERS},
    "abc": _ABC,
    "n": {"type": "integer"},
    "part_sizes": _INTS,
    "predicted_min_degree": {"type": "integer"},
    "min_degree": {"type": "integer"},
    "apex": {"type": ["integer", "null"]},
    "certificate": _CERT,
    "out": {"type": ["string", "null"]},
})

CONSTRUCT_GENERAL = _obj({
    "kind": {"const": "space_general"},
    "r": {"type": "integer", "minimum": 2},
    "i": {"type": "integer", "minimum": 1},
    "sizes": _INTS,
    "n": {"type": "integer"},
    "part_sizes": _INTS,
    "min_degree": {"type": "object", "additionalProperties": {"type": "integer"}},
    "predicted_min_degree": {"type": "object", "additionalProperties": {"type": "integer"}},
    "out": {"type": ["string", "null"]},
})

TILE = _obj(
    {
        "mode": {"enum": ["max", "perfect", "greedy"]},
        "abc": _ABC,
        "n": {"type": "integer"},
        "copies": {"type": "array", "items": _COPY},
        "covered": {"type": "integer", "minimum": 0},
        "optimal": {"type": "boolean"},
        "perfect": {"type": "boolean"},
        "stop_reason": {"enum": ["threshold", "exhausted", "stalled"]},
        "residual": _INTS,
    },
    required=["mode", "abc", "n", "copies", "covered", "optimal", "perfect"],
)

FRACTIONAL_VERIFY = _obj({
    "valid": {"type": "boolean"},
    "weight": RATIONAL,
    "hmin": {"anyOf": [{"type": "null"}, RATIONAL]},
    "violation": {"type": ["string", "null"]},
})

FRACTIONAL_GADGET = _obj({
    "family": {"enum": ["l1", "l2"]},
    "case": {"type": "string"},
    "abc": _ABC,
    "n": {"type": "integer"},
    "edges": {"type": "integer"},
    "link_triples": {"type": "integer"},
    "weight": RATIONAL,
    "hmin": RATIONAL,
    "weight_bound": RATIONAL,
    "valid": {"type": "boolean"},
})

LATTICE = _obj({
    "edge_vectors": _VECTOR_COUNTS,
    "k_vectors": _VECTOR_COUNTS,
    "passed": {"type": "boolean"},
    "missing": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
})

REDUCE = _obj({
    "n": {"type": "integer"},
    "eps": RATIONAL,
    "removed": _INTS,
    "weak_edges": {"type": "integer", "minimum": 0},
    "edges_before": {"type": "integer", "minimum": 0},
    "edges_after": {"type": "integer", "minimum": 0},
    "guarantees": {"type": "object", "additionalProperties": {"type": "boolean"}},
})

REACH = _obj({
    "u": {"type": "integer"},
    "v": {"type": "integer"},
    "i": {"type": "integer", "minimum": 1},
    "witness_count": {"type": "integer", "minimum": 0},
    "total": {"type": "integer", "minimum": 0},
    "normalized": RATIONAL,
})

ABSORB_COUNT = _obj({"S": _INTS, "m": {"type": "integer"}, "count": {"type": "integer", "minimum": 0}})

ABSORB_FAMILY = _obj({
    "m": {"type": "integer"},
    "seed": {"type": "integer"},
    "p": RATIONAL,
    "sampled": {"type": "integer", "minimum": 0},
    "after_disjoint": {"type": "integer", "minimum": 0},
    "sets": {"type": "array", "items": _INTS},
    "witnesses": {"type": "array", "items": _INTS},
})

_ROW = {
    "type": "object",
    "required": ["fraction", "mean_min_degree", "mean_degree_fraction", "tileable_share", "label"],
    "properties": {
        "fraction": {"type": "number", "minimum": 0, "maximum": 1},
        "mean_min_degree": {"type": "number", "minimum": 0},
        "mean_degree_fraction": {"type": "number", "minimum": 0, "maximum": 1},
        "tileable_share": {"type": "number", "minimum": 0, "maximum": 1},
        "label": {"type": "string"},
    },
    "additionalProperties": False,
}

PROBE = _obj({
    "abc": _ABC,
    "n": {"type": "integer"},
    "trials": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer"},
    "rows": {"type": "array", "items": _ROW},
})

SCHEMAS = {
    "threshold": THRESHOLD,
    "classify": CLASSIFY,
    "construct": CONSTRUCT,
    "construct-general": CONSTRUCT_GENERAL,
    "tile": TILE,
    "fractional-verify": FRACTIONAL_VERIFY,
    "fractional-gadget": FRACTIONAL_GADGET,
    "lattice": LATTICE,
    "reduce": REDUCE,
    "reach": REACH,
    "absorb-count": ABSORB_COUNT,
    "absorb-family": ABSORB_FAMILY,
    "probe": PROBE,
}


def schema_for(command: str, action: str | None = None) -> dict:
    """Look up the schema for ``command`` (plus ``action`` for fractional/absorb, or ``general`` for construct)."""
    key = f"{command}-{action}" if action else command
    return SCHEMAS[key]
