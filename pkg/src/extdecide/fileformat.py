"""JSON file formats for operators, towers and decision instances.

Every file is a single JSON object with a format_version field.  Integers
whose magnitude exceeds 2^53 - 1 are serialized as decimal strings so
that consumers with double-precision JSON parsers cannot truncate them;
the loaders accept both forms everywhere an integer is expected.

Serialization is canonical (sorted keys, two-space indent, trailing
newline), so parse -> serialize is byte-stable and fixtures diff cleanly.
Structural errors are reported with the JSON path of the offending value.

Sparse tables: kappa tables and the per-generator action tables omit
entries whose value is 0; a missing key means 0.  Identifiers may be
integers or non-numeric strings (a string of digits would collide with
the integer it spells, so it is rejected).
"""

from __future__ import annotations

import hashlib
import json

from .abelian import FgAbGroup, GroupHom
from .decide import ExtensionInstance
from .diffcalc import DiffOperator
from .tower import ActionLadder, Layer, TowerModel

__all__ = [
    "FORMAT_VERSION",
    "FileFormatError",
    "canonical_json",
    "digest",
    "dump_operator",
    "load_operator",
    "dump_tower",
    "load_tower",
    "dump_instance",
    "load_instance",
    "dump_ladder",
]

FORMAT_VERSION = "1"
_SAFE_INT = 2**53 - 1


class FileFormatError(ValueError):
    """Malformed file content, annotated with the JSON path."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _enc_int(v: int):
    return str(v) if abs(v) > _SAFE_INT else v


def _dec_int(v, path: str) -> int:
    if isinstance(v, bool):
        raise FileFormatError(f"{path}: expected an integer, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        stripped = v[1:] if v.startswith("-") else v
        if stripped.isdigit():
            return int(v)
    raise FileFormatError(f"{path}: expected an integer, got {v!r}")


def _dec_id(v, path: str):
    if isinstance(v, bool):
        raise FileFormatError(f"{path}: booleans are not identifiers")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        stripped = v[1:] if v.startswith("-") else v
        if stripped.isdigit():
            return int(v)
        return v
    raise FileFormatError(f"{path}: identifiers must be integers or strings")


def _enc_id(v):
    if isinstance(v, int):
        return _enc_int(v)
    return v


def _get(obj, key, path: str):
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: expected an object")
    if key not in obj:
        raise FileFormatError(f"{path}.{key}: missing")
    return obj[key]


def _as_list(v, path: str):
    if not isinstance(v, list):
        raise FileFormatError(f"{path}: expected an array")
    return v


def _as_dict(v, path: str):
    if not isinstance(v, dict):
        raise FileFormatError(f"{path}: expected an object")
    return v


def _check_header(data, kind: str):
    version = _get(data, "format_version", "$")
    if version != FORMAT_VERSION:
        raise FileFormatError(
            f"$.format_version: unsupported version {version!r}"
        )
    got = _get(data, "kind", "$")
    if got != kind:
        raise FileFormatError(f"$.kind: expected {kind!r}, got {got!r}")


def _int_list(v, path: str):
    return [_dec_int(x, f"{path}[{i}]") for i, x in enumerate(_as_list(v, path))]


def _int_matrix(v, path: str):
    return [
        _int_list(row, f"{path}[{i}]") for i, row in enumerate(_as_list(v, path))
    ]


# --- difference operators ---

def dump_operator(op: DiffOperator) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "diff_operator",
        "p": _enc_int(op.p),
        "m": _enc_int(op.m),
        "order": _enc_int(op.order),
        "theta": _enc_int(op.theta),
        "terms": [[_enc_int(c), _enc_int(s)] for c, s in op.terms],
    }


def load_operator(data) -> DiffOperator:
    _check_header(data, "diff_operator")
    p = _dec_int(_get(data, "p", "$"), "$.p")
    m = _dec_int(_get(data, "m", "$"), "$.m")
    order = _dec_int(_get(data, "order", "$"), "$.order")
    theta = _dec_int(_get(data, "theta", "$"), "$.theta")
    terms = []
    for i, pair in enumerate(_as_list(_get(data, "terms", "$"), "$.terms")):
        pair = _as_list(pair, f"$.terms[{i}]")
        if len(pair) != 2:
            raise FileFormatError(f"$.terms[{i}]: expected [coefficient, stride]")
        terms.append(
            (_dec_int(pair[0], f"$.terms[{i}][0]"),
             _dec_int(pair[1], f"$.terms[{i}][1]"))
        )
    try:
        return DiffOperator(p=p, m=m, order=order, theta=theta, terms=tuple(terms))
    except ValueError as exc:
        raise FileFormatError(f"$: {exc}") from exc


# --- towers ---

def _dump_sparse_ints(values) -> dict:
    return {str(i): _enc_int(v) for i, v in enumerate(values) if v}

def _load_sparse_ints(data, length: int, path: str):
    out = [0] * length
    for key, v in _as_dict(data, path).items():
        idx = _dec_int(key, f"{path}.{key}")
        if not 0 <= idx < length:
            raise FileFormatError(f"{path}.{key}: index out of range 0..{length - 1}")
        out[idx] = _dec_int(v, f"{path}.{key}")
    return out


def dump_tower(tower: TowerModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "tower",
        "ground": [_enc_int(q) for q in tower.ground.orders],
        "layers": [
            {"q": _enc_int(layer.q), "kappa": _dump_sparse_ints(layer.kappa)}
            for layer in tower.layers
        ],
    }


def load_tower(data) -> TowerModel:
    _check_header(data, "tower")
    orders = _int_list(_get(data, "ground", "$"), "$.ground")
    try:
        ground = FgAbGroup(orders)
        if not ground.is_finite:
            raise ValueError("ground group must be finite")
    except ValueError as exc:
        raise FileFormatError(f"$.ground: {exc}") from exc
    layers = []
    size = ground.size
    for i, entry in enumerate(_as_list(_get(data, "layers", "$"), "$.layers")):
        path = f"$.layers[{i}]"
        q = _dec_int(_get(entry, "q", path), f"{path}.q")
        kappa = _load_sparse_ints(_get(entry, "kappa", path), size, f"{path}.kappa")
        try:
            layers.append(Layer(q=q, kappa=kappa))
        except ValueError as exc:
            raise FileFormatError(f"{path}: {exc}") from exc
        size *= q
    try:
        return TowerModel(ground, layers)
    except ValueError as exc:
        raise FileFormatError(f"$.layers: {exc}") from exc


def dump_ladder(ladder: ActionLadder) -> dict:
    """Audit export: scales, operators and twist tables per layer."""
    return {
        "format_version": FORMAT_VERSION,
        "kind": "ladder",
        "thetas": [_enc_int(t) for t in ladder.thetas],
        "common_theta": _enc_int(ladder.common_theta),
        "layers": [
            {
                "operator": dump_operator(op),
                "twist": [[_enc_int(v) for v in row] for row in twist],
            }
            for op, twist in zip(ladder.ops, ladder.twists)
        ],
    }


# --- decision instances ---

_MAX_TABLE_ENTRIES = 200_000


def dump_instance(inst: ExtensionInstance) -> dict:
    ids_x = [_enc_id(i) for i in inst.x_classes]
    ids_a = [_enc_id(i) for i in inst.a_classes]
    return {
        "format_version": FORMAT_VERSION,
        "kind": "instance",
        "groups": {
            "ground_x": [_enc_int(q) for q in inst.gx.orders],
            "ground_a": [_enc_int(q) for q in inst.ga.orders],
        },
        "homs": {
            "restriction": [[_enc_int(v) for v in row] for row in inst.restriction.matrix],
        },
        "scalars": {"theta": _enc_int(inst.theta)},
        "classes": {"x": ids_x, "a": ids_a},
        "elements": {
            "target_ground": [_enc_int(c) for c in inst.target_ground.coords],
        },
        "distinguished": {"target_class": _enc_id(inst.target_class)},
        "tables": {
            "proj_x": {
                str(g): [_enc_int(c) for c in inst.proj_x[g].coords]
                for g in inst.x_classes
            },
            "proj_a": {
                str(g): [_enc_int(c) for c in inst.proj_a[g].coords]
                for g in inst.a_classes
            },
            "restrict": {str(g): _enc_id(inst.restrict_class[g]) for g in inst.x_classes},
            "act_x": [
                {
                    str(g): _enc_id(inst.act_x[g][j])
                    for g in inst.x_classes
                    if inst.act_x[g][j] != 0
                }
                for j in range(inst.gx.rank)
            ],
            "act_a": [
                {
                    str(g): _enc_id(inst.act_a[g][j])
                    for g in inst.a_classes
                    if inst.act_a[g][j] != 0
                }
                for j in range(inst.ga.rank)
            ],
        },
    }


def _load_group(data, path: str) -> FgAbGroup:
    try:
        return FgAbGroup(_int_list(data, path))
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def _load_ids(data, path: str):
    ids = [_dec_id(v, f"{path}[{i}]") for i, v in enumerate(_as_list(data, path))]
    if len(set(ids)) != len(ids):
        raise FileFormatError(f"{path}: duplicate identifiers")
    return tuple(ids)


def _load_proj(data, ids, group, path: str):
    table = _as_dict(data, path)
    out = {}
    known = set(ids)
    for key, coords in table.items():
        g = _dec_id(key, f"{path}.{key}")
        if g not in known:
            raise FileFormatError(f"{path}.{key}: unknown identifier")
        try:
            out[g] = group.element(_int_list(coords, f"{path}.{key}"))
        except ValueError as exc:
            raise FileFormatError(f"{path}.{key}: {exc}") from exc
    for g in ids:
        out.setdefault(g, group.zero())
    return out


def _load_act(data, ids, rank: int, path: str):
    entries = _as_list(data, path)
    if len(entries) != rank:
        raise FileFormatError(
            f"{path}: expected {rank} generator tables, got {len(entries)}"
        )
    known = set(ids)
    per_gen = []
    total = 0
    for j, table in enumerate(entries):
        tab = {}
        for key, v in _as_dict(table, f"{path}[{j}]").items():
            g = _dec_id(key, f"{path}[{j}].{key}")
            val = _dec_id(v, f"{path}[{j}].{key}")
            if g not in known or val not in known:
                raise FileFormatError(f"{path}[{j}].{key}: unknown identifier")
            tab[g] = val
        for g in ids:
            tab.setdefault(g, 0)  # sparse default
        total += len(tab)
        per_gen.append(tab)
    if total > _MAX_TABLE_ENTRIES:
        raise FileFormatError(f"{path}: table too large ({total} entries)")
    return {g: tuple(per_gen[j][g] for j in range(rank)) for g in ids}


def load_instance(data) -> ExtensionInstance:
    _check_header(data, "instance")
    groups = _get(data, "groups", "$")
    gx = _load_group(_get(groups, "ground_x", "$.groups"), "$.groups.ground_x")
    ga = _load_group(_get(groups, "ground_a", "$.groups"), "$.groups.ground_a")
    homs = _get(data, "homs", "$")
    try:
        restriction = GroupHom(
            gx, ga, _int_matrix(_get(homs, "restriction", "$.homs"), "$.homs.restriction")
        )
    except ValueError as exc:
        raise FileFormatError(f"$.homs.restriction: {exc}") from exc
    theta = _dec_int(
        _get(_get(data, "scalars", "$"), "theta", "$.scalars"), "$.scalars.theta"
    )
    classes = _get(data, "classes", "$")
    x_classes = _load_ids(_get(classes, "x", "$.classes"), "$.classes.x")
    a_classes = _load_ids(_get(classes, "a", "$.classes"), "$.classes.a")
    if len(x_classes) * max(1, gx.rank) > _MAX_TABLE_ENTRIES:
        raise FileFormatError("$.classes.x: instance too large")
    elements = _get(data, "elements", "$")
    try:
        target_ground = ga.element(
            _int_list(_get(elements, "target_ground", "$.elements"),
                      "$.elements.target_ground")
        )
    except ValueError as exc:
        raise FileFormatError(f"$.elements.target_ground: {exc}") from exc
    target_class = _dec_id(
        _get(_get(data, "distinguished", "$"), "target_class", "$.distinguished"),
        "$.distinguished.target_class",
    )
    tables = _get(data, "tables", "$")
    proj_x = _load_proj(_get(tables, "proj_x", "$.tables"), x_classes, gx,
                        "$.tables.proj_x")
    proj_a = _load_proj(_get(tables, "proj_a", "$.tables"), a_classes, ga,
                        "$.tables.proj_a")
    restrict_raw = _as_dict(_get(tables, "restrict", "$.tables"), "$.tables.restrict")
    known_x, known_a = set(x_classes), set(a_classes)
    restrict_class = {}
    for key, v in restrict_raw.items():
        g = _dec_id(key, f"$.tables.restrict.{key}")
        val = _dec_id(v, f"$.tables.restrict.{key}")
        if g not in known_x or val not in known_a:
            raise FileFormatError(f"$.tables.restrict.{key}: unknown identifier")
        restrict_class[g] = val
    missing = known_x - set(restrict_class)
    if missing:
        raise FileFormatError(
            f"$.tables.restrict: missing entries for {sorted(missing)[:5]}"
        )
    act_x = _load_act(_get(tables, "act_x", "$.tables"), x_classes, gx.rank,
                      "$.tables.act_x")
    act_a = _load_act(_get(tables, "act_a", "$.tables"), a_classes, ga.rank,
                      "$.tables.act_a")
    return ExtensionInstance(
        gx=gx, ga=ga, restriction=restriction, target_ground=target_ground,
        theta=theta, x_classes=x_classes, a_classes=a_classes,
        proj_x=proj_x, proj_a=proj_a, restrict_class=restrict_class,
        target_class=target_class, act_x=act_x, act_a=act_a,
    )
