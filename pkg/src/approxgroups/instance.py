"""Instance and report files: canonical JSON on element indices.

An instance names a group (cyclic, dihedral, direct product, or a raw Cayley
table), a family as lists of element indices, optionally the automorphisms
to test invariance against, and optional run configuration.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any

from .errors import ApproxGroupError
from .groups import (
    Automorphism,
    FiniteGroup,
    GroupSubset,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_from_cayley,
)

CONFIG_KEYS = ("max_union", "family_cap", "budget", "seed", "enumerate_automorphisms_up_to")


class ParseError(ApproxGroupError):
    """Malformed instance file; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class InstanceInvalid(ApproxGroupError):
    """Well-formed file whose content is not a valid group, family or automorphism."""


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ParseError(path, message)


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _check_group_spec(spec: Any, path: str) -> None:
    _expect(isinstance(spec, dict), path, "group spec must be an object")
    kind = spec.get("kind")
    if kind in ("cyclic", "dihedral"):
        _expect(_is_int(spec.get("n")) and spec["n"] >= 1, f"{path}.n", "must be a positive integer")
    elif kind == "product":
        factors = spec.get("factors")
        _expect(isinstance(factors, list) and factors, f"{path}.factors", "must be a nonempty list")
        for i, sub in enumerate(factors):
            _check_group_spec(sub, f"{path}.factors[{i}]")
    elif kind == "cayley":
        table = spec.get("table")
        _expect(isinstance(table, list) and table, f"{path}.table", "must be a nonempty matrix")
        for i, row in enumerate(table):
            _expect(isinstance(row, list), f"{path}.table[{i}]", "row must be a list")
            _expect(len(row) == len(table), f"{path}.table[{i}]", f"row has {len(row)} entries, expected {len(table)}")
            for j, v in enumerate(row):
                _expect(_is_int(v), f"{path}.table[{i}][{j}]", "entry must be an integer")
    else:
        raise ParseError(f"{path}.kind", f"unknown group kind {kind!r}")


def group_spec_order(spec: dict) -> int:
    kind = spec["kind"]
    if kind == "cyclic":
        return spec["n"]
    if kind == "dihedral":
        return 2 * spec["n"]
    if kind == "product":
        order = 1
        for sub in spec["factors"]:
            order *= group_spec_order(sub)
        return order
    return len(spec["table"])


def build_group(spec: dict) -> FiniteGroup:
    kind = spec["kind"]
    if kind == "cyclic":
        return make_cyclic(spec["n"])
    if kind == "dihedral":
        return make_dihedral(spec["n"])
    if kind == "product":
        g = build_group(spec["factors"][0])
        for sub in spec["factors"][1:]:
            g = make_direct_product(g, build_group(sub))
        return g
    return make_from_cayley(spec["table"])


@dataclass
class Instance:
    group: dict
    family: list[list[int]]
    automorphisms: list[list[int]] | None = None
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"group": self.group, "family": [sorted(m) for m in self.family]}
        if self.automorphisms is not None:
            out["automorphisms"] = [list(a) for a in self.automorphisms]
        if self.config:
            out["config"] = {k: self.config[k] for k in CONFIG_KEYS if k in self.config}
        return out

    def serialize(self) -> str:
        return canonical_json(self.to_dict())

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()

    def materialize(self) -> tuple[FiniteGroup, list[GroupSubset]]:
        g = build_group(self.group)
        carriers = []
        for i, members in enumerate(self.family):
            bad = [x for x in members if not 0 <= x < g.order]
            if bad:
                raise InstanceInvalid(f"family[{i}] holds element {bad[0]} outside a group of order {g.order}")
            carriers.append(g.subset(members))
        return g, carriers

    def automorphism_list(self, g: FiniteGroup) -> list[Automorphism] | None:
        if self.automorphisms is None:
            return None
        autos = []
        for i, perm in enumerate(self.automorphisms):
            try:
                autos.append(Automorphism(g, tuple(perm)))
            except ValueError as err:
                raise InstanceInvalid(f"automorphisms[{i}]: {err}") from err
        return autos


def parse_instance(text: str) -> Instance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"line {err.lineno} column {err.colno}", err.msg) from err
    _expect(isinstance(raw, dict), "$", "instance must be a JSON object")
    unknown = set(raw) - {"group", "family", "automorphisms", "config"}
    _expect(not unknown, "$", f"unknown fields {sorted(unknown)}")
    _expect("group" in raw, "$.group", "missing")
    _check_group_spec(raw["group"], "$.group")
    fam = raw.get("family")
    _expect(isinstance(fam, list) and fam, "$.family", "must be a nonempty list")
    for i, members in enumerate(fam):
        _expect(isinstance(members, list), f"$.family[{i}]", "member must be a list of indices")
        for j, v in enumerate(members):
            _expect(_is_int(v), f"$.family[{i}][{j}]", "element index must be an integer")
    autos = raw.get("automorphisms")
    if autos is not None:
        _expect(isinstance(autos, list), "$.automorphisms", "must be a list")
        for i, perm in enumerate(autos):
            _expect(isinstance(perm, list) and all(_is_int(v) for v in perm), f"$.automorphisms[{i}]", "must be a list of indices")
    config = raw.get("config", {})
    _expect(isinstance(config, dict), "$.config", "must be an object")
    for key, value in config.items():
        _expect(key in CONFIG_KEYS, f"$.config.{key}", "unknown configuration key")
        _expect(_is_int(value) and value >= 0, f"$.config.{key}", "must be a nonnegative integer")
    return Instance(raw["group"], [list(m) for m in fam], autos, dict(config))


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# ---------------------------------------------------------------- canonical output


def _render(obj: Any, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(json.dumps(v) for v in obj) + "]"
        items = [f"{inner}{_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def canonical_json(obj: Any) -> str:
    """Fixed-order JSON: objects keep insertion order, flat lists stay on one line."""
    return _render(obj, 0) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
