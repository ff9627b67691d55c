"""Manifold specifications: the supported registry, parsing and serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Union

from .errors import ParseError, RangeError
from .grading import _check_gdq
from .seifert import OrbLineBundle, SeifertData, _check


@dataclass(frozen=True)
class S2xS1:
    pass


@dataclass(frozen=True)
class CircleBundle:
    g: int
    d: int
    q: int

    def __post_init__(self) -> None:
        _check_gdq(self.g, self.d, self.q)


@dataclass(frozen=True)
class Nil:
    """Degree-d circle bundle over the torus; spin_lift 0..3 selects the spin structure for Pin(2)."""

    d: int
    q: int = 0
    spin_lift: int | None = None

    def __post_init__(self) -> None:
        if self.d == 0:
            raise RangeError("nil manifolds need d != 0")
        if not 0 <= self.q < abs(self.d):
            raise RangeError(f"need 0 <= q < |d|, got q={self.q}, d={self.d}")
        if self.spin_lift is not None:
            if self.q != 0:
                raise RangeError("spin lifts only exist for q = 0")
            if self.spin_lift not in (0, 1, 2, 3):
                raise RangeError("spin_lift must be 0, 1, 2 or 3")


@dataclass(frozen=True)
class FlatT2Bundle:
    """T^2-bundle over S^1 with finite-order monodromy; spinc 0 carries the harmonic spinor."""

    order: int = 2
    spinc: int = 0
    spin_lift: int | None = None

    def __post_init__(self) -> None:
        if self.order not in (2, 3, 4, 6):
            raise RangeError("monodromy order must be 2, 3, 4 or 6")
        if not 0 <= self.spinc <= 3:
            raise RangeError("spinc index must be 0..3")
        if self.spin_lift is not None and (self.spin_lift not in (0, 1) or self.spinc != 0 or self.order != 2):
            raise RangeError("spin_lift 0|1 is only defined for order 2, spinc 0")


@dataclass(frozen=True)
class HantzscheWendt:
    pass


@dataclass(frozen=True)
class SeifertGeneral:
    data: SeifertData
    N: OrbLineBundle
    E0: OrbLineBundle

    def __post_init__(self) -> None:
        _check(self.data, self.N)
        _check(self.data, self.E0)


ManifoldSpec = Union[S2xS1, CircleBundle, Nil, FlatT2Bundle, HantzscheWendt, SeifertGeneral]

_FIELDS: dict[str, tuple[type, dict[str, bool]]] = {
    # family -> (class, {field: required})
    "s2xs1": (S2xS1, {}),
    "circle_bundle": (CircleBundle, {"g": True, "d": True, "q": True}),
    "nil": (Nil, {"d": True, "q": False, "spin_lift": False}),
    "flat_t2": (FlatT2Bundle, {"order": False, "spinc": False, "spin_lift": False}),
    "hantzsche_wendt": (HantzscheWendt, {}),
    "seifert_general": (SeifertGeneral, {"genus": True, "markings": False, "N": True, "E0": True, "orientable": False}),
}

FAMILIES = tuple(_FIELDS)


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"field {where!r}: expected an integer, got {json.dumps(value)}")
    return value


def _bundle(value: Any, where: str) -> OrbLineBundle:
    if not isinstance(value, Mapping):
        raise ParseError(f"field {where!r}: expected an object with 'b' and 'beta'")
    extra = set(value) - {"b", "beta"}
    if extra:
        raise ParseError(f"field {where!r}: unknown keys {sorted(extra)}")
    if "b" not in value:
        raise ParseError(f"field '{where}.b' is required")
    beta = value.get("beta", [])
    if not isinstance(beta, list):
        raise ParseError(f"field '{where}.beta': expected a list")
    return OrbLineBundle(_int(value["b"], f"{where}.b"), tuple(_int(x, f"{where}.beta[{i}]") for i, x in enumerate(beta)))


def _markings(value: Any) -> tuple[tuple[int, int], ...]:
    if not isinstance(value, list):
        raise ParseError("field 'markings': expected a list of [alpha, beta] pairs")
    out = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"field 'markings[{i}]': expected [alpha, beta]")
        out.append((_int(pair[0], f"markings[{i}][0]"), _int(pair[1], f"markings[{i}][1]")))
    return tuple(out)


def parse_spec(document: str | Mapping[str, Any]) -> ManifoldSpec:
    """Validate a JSON document (text or already-decoded mapping) into a ManifoldSpec."""
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    else:
        data = document
    if not isinstance(data, Mapping):
        raise ParseError("top level must be a JSON object")
    family = data.get("family")
    if family not in _FIELDS:
        raise ParseError(f"field 'family': expected one of {list(FAMILIES)}, got {json.dumps(family)}")
    cls, fields = _FIELDS[family]
    extra = set(data) - set(fields) - {"family"}
    if extra:
        raise ParseError(f"unknown fields for family {family!r}: {sorted(extra)}")
    for name, required in fields.items():
        if required and name not in data:
            raise ParseError(f"field {name!r} is required for family {family!r}")
    if family == "seifert_general":
        orientable = data.get("orientable", True)
        if not isinstance(orientable, bool):
            raise ParseError("field 'orientable': expected true or false")
        base = SeifertData(_int(data["genus"], "genus"), _markings(data.get("markings", [])), orientable)
        return SeifertGeneral(base, _bundle(data["N"], "N"), _bundle(data["E0"], "E0"))
    kwargs = {}
    for name in fields:
        if name in data and not (name == "spin_lift" and data[name] is None):
            kwargs[name] = _int(data[name], name)
    return cls(**kwargs)


def serialize(spec: ManifoldSpec) -> dict[str, Any]:
    """Inverse of parse_spec: a JSON-ready mapping with keys in a fixed order."""
    for family, (cls, fields) in _FIELDS.items():
        if type(spec) is cls:
            break
    else:
        raise ParseError(f"not a registry spec: {spec!r}")
    out: dict[str, Any] = {"family": family}
    if isinstance(spec, SeifertGeneral):
        out["genus"] = spec.data.genus
        out["markings"] = [list(m) for m in spec.data.markings]
        out["N"] = {"b": spec.N.b, "beta": list(spec.N.beta)}
        out["E0"] = {"b": spec.E0.b, "beta": list(spec.E0.beta)}
        return out
    for name in fields:
        value = getattr(spec, name)
        if value is not None:
            out[name] = value
    return out
