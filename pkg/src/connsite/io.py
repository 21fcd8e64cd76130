"""JSON file formats for spaces, presheaves and interval witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .core import (
    ConnectivityStructure,
    GeneratorFamily,
    GroundSet,
    generate_structure,
    hasse_edges,
)
from .errors import MalformedInputError
from .interval import ChainWitness, RationalInterval, _q
from .sheaf import Presheaf

MODES = ("structure", "generators")


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise MalformedInputError(msg)


@dataclass(frozen=True)
class SpaceFile:
    ground: GroundSet
    sets: tuple[int, ...]
    mode: str = "structure"

    def build(self) -> ConnectivityStructure:
        if self.mode == "generators":
            return generate_structure(GeneratorFamily(self.ground, frozenset(self.sets)))
        return ConnectivityStructure(self.ground, self.sets)


def read_space_file(text: str) -> SpaceFile:
    data = load_json(text)
    _expect(isinstance(data, dict), "space file must be a JSON object")
    unknown = set(data) - {"elements", "connected", "mode"}
    _expect(not unknown, f"unknown keys in space file: {sorted(unknown)}")
    elements = data.get("elements")
    _expect(isinstance(elements, list), '"elements" must be a list of labels')
    ground = GroundSet(tuple(elements))
    mode = data.get("mode", "structure")
    _expect(mode in MODES, f'"mode" must be one of {MODES}, got {mode!r}')
    connected = data.get("connected", [])
    _expect(isinstance(connected, list), '"connected" must be a list of sets')
    sets = []
    for s in connected:
        _expect(isinstance(s, list), f"each connected set must be a list of labels, got {s!r}")
        sets.append(ground.mask_of(s))
    return SpaceFile(ground, tuple(sets), mode)


def parse_space(text: str) -> ConnectivityStructure:
    return read_space_file(text).build()


def _dump(value) -> str:
    return json.dumps(value, ensure_ascii=False)


def serialize_space(K: ConnectivityStructure) -> str:
    """Canonical structure-mode file; parsing it back and serializing again is byte-identical."""
    g = K.ground
    lines = [
        "{",
        f'  "elements": {_dump(list(g.names))},',
        '  "mode": "structure",',
        '  "connected": [',
    ]
    body = [f"    {_dump(list(g.labels_of(A)))}" for A in K.family]
    lines.append(",\n".join(body))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def parse_presheaf(text: str, K: ConnectivityStructure) -> Presheaf:
    data = load_json(text)
    g = K.ground
    _expect(isinstance(data, dict), "presheaf file must be a JSON object")
    raw_sections = data.get("sections")
    raw_maps = data.get("restrictions", {})
    _expect(isinstance(raw_sections, dict), '"sections" must be an object keyed by set keys')
    _expect(isinstance(raw_maps, dict), '"restrictions" must be an object keyed by "A->B"')
    sections = {}
    for key, labels in raw_sections.items():
        _expect(
            isinstance(labels, list) and all(isinstance(x, str) for x in labels),
            f"sections of {key!r} must be a list of strings",
        )
        sections[K.require(g.from_key(key))] = tuple(labels)
    restrictions = {}
    for key, mapping in raw_maps.items():
        _expect(key.count("->") == 1, f"restriction key {key!r} must look like 'A->B'")
        upper, lower = key.split("->")
        _expect(
            isinstance(mapping, dict) and all(isinstance(v, str) for v in mapping.values()),
            f"restriction {key!r} must map labels to labels",
        )
        restrictions[(g.from_key(upper), g.from_key(lower))] = mapping
    edges = set(hasse_edges(K))
    for e in restrictions:
        _expect(e in edges, f"{g.key(e[0])}->{g.key(e[1])} is not a Hasse edge")
    return Presheaf(K, sections, restrictions)


def presheaf_to_json(F: Presheaf) -> dict:
    K = F.structure
    g = K.ground
    return {
        "sections": {g.key(A): list(F.sections[A]) for A in K.family},
        "restrictions": {
            f"{g.key(A)}->{g.key(B)}": dict(F.restrictions[(A, B)]) for A, B in hasse_edges(K)
        },
    }


def serialize_presheaf(F: Presheaf) -> str:
    return json.dumps(presheaf_to_json(F), indent=2, ensure_ascii=False) + "\n"


def interval_to_json(I: RationalInterval) -> list[str]:
    return [] if I.is_empty else [str(I.lo), str(I.hi)]


def interval_from_json(value) -> RationalInterval:
    _expect(isinstance(value, list) and len(value) in (0, 2), f"interval must be [] or [lo, hi], got {value!r}")
    if not value:
        return RationalInterval.empty()
    _expect(all(isinstance(v, (str, int)) for v in value), "interval endpoints must be strings or integers")
    return RationalInterval(_q(value[0]), _q(value[1]))


def witness_to_json(w: ChainWitness) -> dict:
    return {
        "target": interval_to_json(w.target),
        "epsilon": str(w.epsilon),
        "pieces": [interval_to_json(p) for p in w.pieces],
    }


def witness_from_json(data) -> ChainWitness:
    _expect(isinstance(data, dict), "witness file must be a JSON object")
    for k in ("target", "epsilon", "pieces"):
        _expect(k in data, f"witness file lacks {k!r}")
    _expect(isinstance(data["pieces"], list), '"pieces" must be a list')
    _expect(isinstance(data["epsilon"], (str, int)), '"epsilon" must be a rational string')
    return ChainWitness(
        interval_from_json(data["target"]),
        Fraction(_q(data["epsilon"])),
        tuple(interval_from_json(p) for p in data["pieces"]),
    )
