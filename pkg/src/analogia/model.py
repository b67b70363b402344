"""Shared data model: aspects, instances, connections, concepts, knowledge bases.

Knowledge bases are read from a JSON document::

    {
      "schema": [{"name": "size", "kind": "numeric", "lower": 0, "upper": 10},
                 {"name": "colour", "kind": "symbolic-set"}],
      "instances": [{"id": "a", "values": {"size": 3, "colour": ["red"]}}],
      "connections": [{"P": ["colour"], "Q": "size"}],
      "concepts": [{"id": "k", "members": ["a"], "order": [],
                    "relevant": {"a": ["colour"]}}]
    }

Everything returned by the loader is immutable; operations elsewhere in the
package never mutate a knowledge base, they build new views of it.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Any, Union

SYMBOLIC = "symbolic-set"
NUMERIC = "numeric"

Value = Union[frozenset, float]

TOP_LEVEL_KEYS = ("schema", "instances", "connections", "concepts")


class KnowledgeBaseError(Exception):
    """Base class for every error raised while reading or querying a KB."""


class ParseError(KnowledgeBaseError):
    """The document is not well-formed JSON of the expected shape."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class ValidationError(KnowledgeBaseError):
    """The document parsed but violates a knowledge-base invariant."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class DisjointDescriptionError(KnowledgeBaseError):
    """Two instances have no mutually assigned aspect, so cannot be compared."""


class DuplicateSymbolWarning(UserWarning):
    pass


class ConnectionStatus(str, enum.Enum):
    TOTAL = "total"
    INCOMPLETE = "incomplete"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class AspectSchema:
    """Declaration of one aspect (feature slot).

    ``positive`` names the symbol that counts as the positive state of a
    binary symbolic aspect; only the simple matching coefficient uses it.
    """

    name: str
    kind: str = SYMBOLIC
    lower: float | None = None
    upper: float | None = None
    positive: str | None = None

    def __post_init__(self):
        if self.kind not in (SYMBOLIC, NUMERIC):
            raise ValidationError(f"unknown aspect kind {self.kind!r}")
        if self.kind == NUMERIC:
            if self.lower is None or self.upper is None:
                raise ValidationError(f"numeric aspect {self.name!r} needs lower and upper bounds")
            if not self.upper > self.lower:
                raise ValidationError(
                    f"numeric aspect {self.name!r} has upper {self.upper} <= lower {self.lower}"
                )
        if self.positive is not None and self.kind != SYMBOLIC:
            raise ValidationError(f"aspect {self.name!r}: only symbolic aspects declare a positive symbol")

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    @property
    def span(self) -> float:
        """Absolute width of the admissible interval (``ul``)."""
        if not self.is_numeric:
            raise TypeError(f"aspect {self.name!r} is symbolic and has no numeric span")
        return abs(self.upper - self.lower)

    def admits(self, value: Value) -> bool:
        if self.is_numeric:
            return isinstance(value, float) and self.lower <= value <= self.upper
        return isinstance(value, frozenset)


@dataclass(frozen=True)
class Instance:
    """An entity described by a partial map from aspect names to values.

    Symbolic values are frozensets of strings, numeric values are floats.
    """

    id: str
    values: Mapping[str, Value] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))

    def __hash__(self):
        return hash(self.id)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.id == other.id and dict(self.values) == dict(other.values)

    def __getitem__(self, aspect: str) -> Value:
        return self.values[aspect]

    def assigns(self, aspect: str) -> bool:
        return aspect in self.values

    def shared_aspects(self, other: Instance) -> list[str]:
        """Aspects assigned in both descriptions, in this instance's order."""
        return [a for a in self.values if a in other.values]


def make_instance(id: str, **values: Any) -> Instance:
    """Build an instance from loose Python values (lists/sets of str, numbers)."""
    return Instance(id, {k: coerce_value(v) for k, v in values.items()})


def coerce_value(value: Any) -> Value:
    if isinstance(value, bool):
        raise TypeError("booleans are not feature values")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        return frozenset([value])
    return frozenset(value)


@dataclass(frozen=True)
class Connection:
    """A dependence [P, Q] of aspect ``Q`` on the aspect set ``P``."""

    P: tuple[str, ...]
    Q: str
    status: ConnectionStatus = ConnectionStatus.UNVERIFIED
    id: str | None = None

    def __post_init__(self):
        P = tuple(self.P) if not isinstance(self.P, str) else (self.P,)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "status", ConnectionStatus(self.status))
        if not P:
            raise ValidationError("connection needs a nonempty P")
        if len(set(P)) != len(P):
            raise ValidationError(f"connection P {list(P)} repeats an aspect")
        if self.Q in P:
            raise ValidationError(f"connection Q {self.Q!r} also appears in P")

    @property
    def label(self) -> str:
        return self.id or f"[{','.join(self.P)};{self.Q}]"

    def with_status(self, status: ConnectionStatus) -> Connection:
        return replace(self, status=ConnectionStatus(status))


@dataclass(frozen=True)
class Concept:
    """A set of examples with a typicality order.

    ``order`` holds pairs ``(e, e2)`` read as "e is below e2"; ``relevant``
    maps a member to the aspects relevant for projecting from it.
    """

    id: str
    members: tuple[str, ...]
    order: tuple[tuple[str, str], ...] = ()
    relevant: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "order", tuple((a, b) for a, b in self.order))
        object.__setattr__(
            self, "relevant", MappingProxyType({k: frozenset(v) for k, v in self.relevant.items()})
        )

    def __hash__(self):
        return hash((self.id, self.members, self.order))

    def __eq__(self, other):
        if not isinstance(other, Concept):
            return NotImplemented
        return (self.id, self.members, self.order, dict(self.relevant)) == (
            other.id,
            other.members,
            other.order,
            dict(other.relevant),
        )


@dataclass(frozen=True)
class KnowledgeBase:
    schema: tuple[AspectSchema, ...] = ()
    instances: tuple[Instance, ...] = ()
    connections: tuple[Connection, ...] = ()
    concepts: tuple[Concept, ...] = ()

    def __post_init__(self):
        for name in TOP_LEVEL_KEYS:
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _validate(self)

    def aspect(self, name: str) -> AspectSchema:
        for a in self.schema:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def aspects(self) -> dict[str, AspectSchema]:
        return {a.name: a for a in self.schema}

    def instance(self, id: str) -> Instance:
        for inst in self.instances:
            if inst.id == id:
                return inst
        raise KeyError(id)

    def concept(self, id: str) -> Concept:
        for c in self.concepts:
            if c.id == id:
                return c
        raise KeyError(id)

    def with_instances(self, *extra: Instance) -> KnowledgeBase:
        return replace(self, instances=self.instances + tuple(extra))

    def with_connections(self, connections: Iterable[Connection]) -> KnowledgeBase:
        return replace(self, connections=tuple(connections))


def _validate(kb: KnowledgeBase) -> None:
    aspects: dict[str, AspectSchema] = {}
    for i, a in enumerate(kb.schema):
        if a.name in aspects:
            raise ValidationError(f"duplicate aspect name {a.name!r}", f"$.schema[{i}]")
        aspects[a.name] = a

    ids: set[str] = set()
    for i, inst in enumerate(kb.instances):
        if inst.id in ids:
            raise ValidationError(f"duplicate instance id {inst.id!r}", f"$.instances[{i}].id")
        ids.add(inst.id)
        for name, value in inst.values.items():
            path = f"$.instances[{i}].values.{name}"
            if name not in aspects:
                raise ValidationError(f"unknown aspect {name!r}", path)
            schema = aspects[name]
            if not schema.admits(value):
                if schema.is_numeric and isinstance(value, float):
                    raise ValidationError(
                        f"value {value:g} outside [{schema.lower:g}, {schema.upper:g}] "
                        f"of aspect {name!r}",
                        path,
                    )
                raise ValidationError(f"value shape does not match {schema.kind} aspect {name!r}", path)

    for i, c in enumerate(kb.connections):
        for name in (*c.P, c.Q):
            if name not in aspects:
                raise ValidationError(f"connection refers to unknown aspect {name!r}", f"$.connections[{i}]")

    concept_ids: set[str] = set()
    for i, c in enumerate(kb.concepts):
        path = f"$.concepts[{i}]"
        if c.id in concept_ids:
            raise ValidationError(f"duplicate concept id {c.id!r}", f"{path}.id")
        concept_ids.add(c.id)
        members = set(c.members)
        if len(members) != len(c.members):
            raise ValidationError("concept lists a member twice", f"{path}.members")
        for m in c.members:
            if m not in ids:
                raise ValidationError(f"member {m!r} is not an instance", f"{path}.members")
        for j, (lo, hi) in enumerate(c.order):
            for e in (lo, hi):
                if e not in members:
                    raise ValidationError(f"order mentions non-member {e!r}", f"{path}.order[{j}]")
        for m, names in c.relevant.items():
            if m not in members:
                raise ValidationError(f"relevance declared for non-member {m!r}", f"{path}.relevant")
            for name in names:
                if name not in aspects:
                    raise ValidationError(f"unknown aspect {name!r}", f"{path}.relevant.{m}")


# --------------------------------------------------------------------------
# document reading / writing


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise ParseError(message, path)


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_value(raw: Any, path: str) -> Value:
    if _is_number(raw):
        _expect(math.isfinite(raw), "numeric value must be finite", path)
        return float(raw)
    _expect(isinstance(raw, list), "value must be a number or an array of strings", path)
    _expect(all(isinstance(s, str) for s in raw), "symbolic values must be strings", path)
    symbols = frozenset(raw)
    if len(symbols) != len(raw):
        warnings.warn(f"{path}: duplicate symbols collapsed", DuplicateSymbolWarning, stacklevel=4)
    return symbols


def _parse_schema(raw: Any) -> list[AspectSchema]:
    _expect(isinstance(raw, list), "schema must be an array", "$.schema")
    out = []
    for i, entry in enumerate(raw):
        path = f"$.schema[{i}]"
        _expect(isinstance(entry, dict), "aspect declaration must be an object", path)
        _expect(isinstance(entry.get("name"), str), "aspect needs a string name", f"{path}.name")
        kind = entry.get("kind", SYMBOLIC)
        _expect(kind in (SYMBOLIC, NUMERIC), f"kind must be {SYMBOLIC!r} or {NUMERIC!r}", f"{path}.kind")
        for key in ("lower", "upper"):
            if key in entry:
                _expect(_is_number(entry[key]), f"{key} must be a number", f"{path}.{key}")
        if "positive" in entry:
            _expect(isinstance(entry["positive"], str), "positive must be a string", f"{path}.positive")
        unknown = set(entry) - {"name", "kind", "lower", "upper", "positive"}
        _expect(not unknown, f"unknown keys {sorted(unknown)}", path)
        try:
            out.append(
                AspectSchema(
                    entry["name"],
                    kind,
                    None if entry.get("lower") is None else float(entry["lower"]),
                    None if entry.get("upper") is None else float(entry["upper"]),
                    entry.get("positive"),
                )
            )
        except ValidationError as exc:
            raise ValidationError(exc.message, path) from None
    return out


def _parse_instances(raw: Any) -> list[Instance]:
    _expect(isinstance(raw, list), "instances must be an array", "$.instances")
    out = []
    for i, entry in enumerate(raw):
        path = f"$.instances[{i}]"
        _expect(isinstance(entry, dict), "instance must be an object", path)
        _expect(isinstance(entry.get("id"), str), "instance needs a string id", f"{path}.id")
        values = entry.get("values", {})
        _expect(isinstance(values, dict), "values must be an object", f"{path}.values")
        unknown = set(entry) - {"id", "values"}
        _expect(not unknown, f"unknown keys {sorted(unknown)}", path)
        out.append(Instance(entry["id"], {k: _parse_value(v, f"{path}.values.{k}") for k, v in values.items()}))
    return out


def _parse_connections(raw: Any) -> list[Connection]:
    _expect(isinstance(raw, list), "connections must be an array", "$.connections")
    out = []
    for i, entry in enumerate(raw):
        path = f"$.connections[{i}]"
        _expect(isinstance(entry, dict), "connection must be an object", path)
        P = entry.get("P")
        _expect(
            isinstance(P, list) and all(isinstance(p, str) for p in P),
            "P must be an array of aspect names",
            f"{path}.P",
        )
        _expect(isinstance(entry.get("Q"), str), "Q must be an aspect name", f"{path}.Q")
        status = entry.get("status", ConnectionStatus.UNVERIFIED.value)
        _expect(
            status in {s.value for s in ConnectionStatus},
            "status must be total, incomplete or unverified",
            f"{path}.status",
        )
        if "id" in entry:
            _expect(isinstance(entry["id"], str), "id must be a string", f"{path}.id")
        unknown = set(entry) - {"P", "Q", "status", "id"}
        _expect(not unknown, f"unknown keys {sorted(unknown)}", path)
        try:
            out.append(Connection(tuple(P), entry["Q"], ConnectionStatus(status), entry.get("id")))
        except ValidationError as exc:
            raise ValidationError(exc.message, path) from None
    return out


def _parse_concepts(raw: Any) -> list[Concept]:
    _expect(isinstance(raw, list), "concepts must be an array", "$.concepts")
    out = []
    for i, entry in enumerate(raw):
        path = f"$.concepts[{i}]"
        _expect(isinstance(entry, dict), "concept must be an object", path)
        _expect(isinstance(entry.get("id"), str), "concept needs a string id", f"{path}.id")
        members = entry.get("members", [])
        _expect(
            isinstance(members, list) and all(isinstance(m, str) for m in members),
            "members must be an array of instance ids",
            f"{path}.members",
        )
        order = entry.get("order", [])
        _expect(isinstance(order, list), "order must be an array of pairs", f"{path}.order")
        for j, pair in enumerate(order):
            _expect(
                isinstance(pair, list) and len(pair) == 2 and all(isinstance(e, str) for e in pair),
                "order entries must be [lower, upper] id pairs",
                f"{path}.order[{j}]",
            )
        relevant = entry.get("relevant", {})
        _expect(isinstance(relevant, dict), "relevant must be an object", f"{path}.relevant")
        for m, names in relevant.items():
            _expect(
                isinstance(names, list) and all(isinstance(n, str) for n in names),
                "relevant entries must be arrays of aspect names",
                f"{path}.relevant.{m}",
            )
        unknown = set(entry) - {"id", "members", "order", "relevant"}
        _expect(not unknown, f"unknown keys {sorted(unknown)}", path)
        out.append(Concept(entry["id"], tuple(members), tuple(tuple(p) for p in order), relevant))
    return out


def knowledge_base_from_dict(data: Any, *, extra_keys: Iterable[str] = ()) -> KnowledgeBase:
    """Build and validate a KB from an already-decoded JSON object."""
    _expect(isinstance(data, dict), "document must be a JSON object", "$")
    unknown = set(data) - set(TOP_LEVEL_KEYS) - set(extra_keys)
    _expect(not unknown, f"unknown top-level keys {sorted(unknown)}", "$")
    _expect("schema" in data, "missing required key 'schema'", "$")
    return KnowledgeBase(
        _parse_schema(data["schema"]),
        _parse_instances(data.get("instances", [])),
        _parse_connections(data.get("connections", [])),
        _parse_concepts(data.get("concepts", [])),
    )


def decode_document(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


def load_knowledge_base(text: str) -> KnowledgeBase:
    """Parse and validate a knowledge-base document.

    Raises :class:`ParseError` for malformed documents and
    :class:`ValidationError` for invariant violations; both carry a JSON
    path to the offending element.
    """
    return knowledge_base_from_dict(decode_document(text))


def read_knowledge_base(path: str | Path) -> KnowledgeBase:
    return load_knowledge_base(Path(path).read_text(encoding="utf-8"))


def value_to_json(value: Value) -> Any:
    if isinstance(value, frozenset):
        return sorted(value)
    return value


def knowledge_base_to_dict(kb: KnowledgeBase) -> dict:
    schema = []
    for a in kb.schema:
        entry: dict[str, Any] = {"name": a.name, "kind": a.kind}
        if a.is_numeric:
            entry["lower"], entry["upper"] = a.lower, a.upper
        if a.positive is not None:
            entry["positive"] = a.positive
        schema.append(entry)
    connections = []
    for c in kb.connections:
        entry = {"P": list(c.P), "Q": c.Q, "status": c.status.value}
        if c.id is not None:
            entry["id"] = c.id
        connections.append(entry)
    return {
        "schema": schema,
        "instances": [
            {"id": inst.id, "values": {k: value_to_json(v) for k, v in inst.values.items()}}
            for inst in kb.instances
        ],
        "connections": connections,
        "concepts": [
            {
                "id": c.id,
                "members": list(c.members),
                "order": [list(p) for p in c.order],
                "relevant": {m: sorted(names) for m, names in c.relevant.items()},
            }
            for c in kb.concepts
        ],
    }


def dump_knowledge_base(kb: KnowledgeBase) -> str:
    return json.dumps(knowledge_base_to_dict(kb), indent=2, ensure_ascii=False)


def instance_match_counts(a: Instance, b: Instance) -> tuple[int, int]:
    """Return ``(i, m)``: equal aspects and mutually assigned aspects."""
    shared = a.shared_aspects(b)
    if not shared:
        raise DisjointDescriptionError(f"{a.id!r} and {b.id!r} share no assigned aspect")
    i = sum(1 for name in shared if a[name] == b[name])
    return i, len(shared)
